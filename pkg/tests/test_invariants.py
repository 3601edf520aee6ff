import pytest

import invariants


@pytest.mark.parametrize("check", invariants.ALL, ids=lambda f: f.__name__)
def test_small_corpus(check):
    assert check(150) == 150
