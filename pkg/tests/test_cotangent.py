from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from chowsmooth.charts import bundled_case, parse_case, format_case, relabel_case
from chowsmooth.poly import make_ring
from chowsmooth.cotangent import (
    ablate,
    bareiss_rank,
    build_relations,
    declared_labels,
    rank_over_q,
    saturating_relations,
    verify_case,
)

small_ints = st.integers(min_value=-3, max_value=3)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=5, max_size=5), min_size=1, max_size=6), st.randoms())
def test_rank_routes_agree_and_ignore_row_order_and_scaling(rows, rnd):
    want = Matrix(rows).rank()
    assert rank_over_q([[Fraction(x) for x in r] for r in rows]) == want
    R = make_ring(["x_1"])
    lift = lambda rs: [[R(x) for x in r] for r in rs]  # noqa: E731
    assert bareiss_rank(lift(rows), 5)[0] == want
    shuffled = [list(r) for r in rows]
    rnd.shuffle(shuffled)
    factors = [rnd.choice([-3, -1, 2, 5]) for _ in shuffled]
    scaled = [[x * k for x in r] for r, k in zip(shuffled, factors)]
    assert bareiss_rank(lift(scaled), 5)[0] == want


def test_symbolic_bareiss_rank():
    case = bundled_case("A.1")
    m = build_relations(case)
    rank, cols, pivots = bareiss_rank(m.rows, len(m.columns))
    assert rank == 8 and len(set(cols)) == 8


def test_a1_certificate():
    ok, rep = verify_case(bundled_case("A.1"))
    assert ok, rep.error
    assert rep.corank == 4
    assert rep.sampled_ranks == [rep.rank] * 3
    assert set(rep.to_dict()["spanning"]) == {"dx_1", "dx_2", "dx_3", "dy_1"}


def test_seed_does_not_change_the_rank():
    case = bundled_case("B.2")
    reps = [verify_case(case, seed=s)[1] for s in (0, 1, 99)]
    assert {r.corank for r in reps} == {4}


def test_ablating_the_essential_line_raises_corank():
    case = bundled_case("A.1")
    assert len(declared_labels(case)) == 4
    ok, rep = verify_case(case, relations=ablate(case, 0))
    assert not ok
    assert rep.corank > 4
    assert rep.error.startswith("CorankMismatch")
    with pytest.raises(IndexError):
        ablate(case, 4)


def test_mistranscribed_relation_is_named():
    text = format_case(bundled_case("A.1"))
    bad = text.replace("1:cr(C,A;D,B|E) == 2:cr(C,A;D,B|E)", "1:cr(C,A;D,B|E) == 2:cr(C,E;D,B|A)", 1)
    assert bad != text
    ok, rep = verify_case(parse_case(bad))
    assert not ok and rep.error.startswith("ConstantNonvanishing")


def test_mirror_of_f1_prime_still_verifies():
    # reflect the labelling C<->E, B<->D; corank is a property of the geometry
    case = bundled_case("F.1'")
    mirror = relabel_case(case, {"C": "E", "E": "C", "B": "D", "D": "B"}, "F.1' mirrored")
    ok, rep = verify_case(mirror)
    assert ok, rep.error
    assert rep.corank == 4


def test_saturation_keeps_a1_at_corank_4():
    case = bundled_case("A.1")
    extra = saturating_relations(case)
    assert extra
    ok, rep = verify_case(case, relations=case.relations + extra)
    assert ok and rep.corank == 4


def test_report_is_reproducible():
    case = bundled_case("C.4")
    a = verify_case(case, seed=7)[1].to_dict()
    b = verify_case(case, seed=7)[1].to_dict()
    assert a == b
