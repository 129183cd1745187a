import random

import pytest

from chowsmooth.homology import (
    ConditionPattern,
    NonGenericData,
    PatternMismatch,
    TransportProblem,
    all_patterns,
    build_system,
    coefficient,
    identity_problem,
    kernel,
    run_trials,
    satisfies,
    singular_problem,
    as_matrix,
)


def test_five_patterns():
    assert [p.name for p in all_patterns()] == ["4b0a", "3b2a", "2b4a", "1b6a", "0b8a"]
    with pytest.raises(PatternMismatch):
        ConditionPattern(3, 1)


def test_frame_to_itself_is_the_identity():
    prob = identity_problem()
    (vec,) = kernel(build_system(prob))
    M = as_matrix(vec)
    assert all(M[i][j] == (M[0][0] if i == j else 0) for i in range(3) for j in range(3))
    assert coefficient(prob) == 1


def test_singular_kernel_gives_zero():
    prob, M0 = singular_problem(random.Random(3))
    assert satisfies(prob, M0)
    assert coefficient(prob) == 0


def test_degenerate_data_is_rejected():
    p = [1, 0, 0]
    prob = TransportProblem(beta=[(p, p)] * 4)
    with pytest.raises(NonGenericData):
        coefficient(prob)


@pytest.mark.parametrize("pattern", all_patterns(), ids=lambda p: p.name)
def test_coefficient_is_one(pattern):
    r = run_trials(pattern, trials=25, seed=11)
    assert r["passed"], r
    assert r["coefficients"] == {"1": 25}
