from chowsmooth.charts import bundled_case
from chowsmooth.poly import parse_ratfunc
from chowsmooth.invariants import parse_spec
from chowsmooth.sampler import (
    SampleConfig,
    coordinate_example,
    cross_chart_agreement,
    validate_formula,
)

CFG = SampleConfig(seed=0, trials=30)


def test_published_formula_holds():
    case = bundled_case("A.1")
    chart = case.charts[2]
    r = validate_formula(chart, parse_spec("cr(E,A;F,B|C)"), parse_ratfunc("x_2*z_2*t_2", case.ring), CFG)
    assert r["passed"] and r["agreed"] == 30


def test_wrong_formula_is_caught_with_a_counterexample():
    case = bundled_case("A.1")
    chart = case.charts[2]
    r = validate_formula(chart, parse_spec("cr(E,A;F,B|C)"), parse_ratfunc("x_2*z_2", case.ring), CFG)
    assert not r["passed"]
    assert r["counterexample"] is not None


def test_agreement_checks_something_on_a1():
    r = cross_chart_agreement(bundled_case("A.1"), CFG)
    assert r["passed"]
    assert r["checked"] > 0


def test_agreement_on_y5_charts():
    for name in ("Y5.simple", "Y5.deep"):
        r = cross_chart_agreement(bundled_case(name), CFG)
        assert r["passed"] and r["checked"] > 0, name


def test_seeded_runs_repeat():
    a = cross_chart_agreement(bundled_case("C.4"), CFG)
    b = cross_chart_agreement(bundled_case("C.4"), CFG)
    assert a == b


def test_symbolic_pencil_value():
    assert coordinate_example()["passed"]
