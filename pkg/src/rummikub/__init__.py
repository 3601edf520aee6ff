"""Exact Rummikub move solver: best score for a hand plus table, brute-force
oracle, and exact counts of winning hands."""
from .counting import (CountRow, catalog_sets, count_winning_hands, partitions_into_345,
                       total_hands, winning_counts, winning_table)
from .groups import GroupUsageQuery, count_group_formations, max_group_tiles
from .oracle import BudgetExceeded, OracleBudget, oracle_max_score
from .runstate import make_runs, reachable_states, tetrahedral
from .solver import (Arrangement, GroupPlacement, RunPlacement, best_arrangement,
                     is_fully_playable, max_score, verify_arrangement)
from .tileset import (Hand, Problem, ProblemError, Tile, TileSetParams, canonical_key,
                      format_problem, parse_problem)

__all__ = [
    "Arrangement", "BudgetExceeded", "CountRow", "GroupPlacement", "GroupUsageQuery",
    "Hand", "OracleBudget", "Problem", "ProblemError", "RunPlacement", "Tile",
    "TileSetParams", "best_arrangement", "canonical_key", "catalog_sets",
    "count_group_formations", "count_winning_hands", "format_problem",
    "is_fully_playable", "make_runs", "max_group_tiles", "max_score",
    "oracle_max_score", "parse_problem", "partitions_into_345", "reachable_states",
    "tetrahedral", "total_hands", "verify_arrangement", "winning_counts", "winning_table",
]
