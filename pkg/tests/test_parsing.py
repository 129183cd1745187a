import pytest

from chowsmooth.charts import (
    ValidationError,
    bundled_case,
    case_structure,
    corpus_files,
    format_case,
    load_case,
    parse_case,
    relabel_case,
)
from chowsmooth.poly import ParseError, format_poly, make_ring, parse_poly, parse_ratfunc

SMALL = """\
case tiny
expect corank 2
chart 1
var x_1 class inf
var y_1 class generic
point A = (1 : 0 : 0)
point B = (0 : 1 : 0)
point C = (0 : 0 : 1)
point D = (1 : 1 : 1)
point E = (1 : 1 + x_1 : y_1)
"""


def test_poly_round_trip():
    R = make_ring(["x_1", "y_1", "t_2"])
    p = parse_poly("(1 + x_1)^2 - 2*x_1*t_2", R)
    assert parse_poly(format_poly(p), R) == p


@pytest.mark.parametrize("text", ["1 + ", "x_1 *", "(x_1", "x_1 ^ y_1", "q_9", "2 $ 3"])
def test_poly_parse_errors(text):
    R = make_ring(["x_1", "y_1"])
    with pytest.raises(ParseError):
        parse_poly(text, R)


def test_ratfunc_division():
    R = make_ring(["x_1", "y_1"])
    f = parse_ratfunc("x_1/(x_1*y_1)", R)
    g = parse_ratfunc("1/y_1", R)
    assert f.num * g.den == g.num * f.den


def test_minimal_case_parses():
    case = parse_case(SMALL)
    assert case.case_name == "tiny"
    assert case.expected_corank == 2
    assert sorted(case.variables) == ["x_1", "y_1"]


@pytest.mark.parametrize(
    "mutation, error",
    [
        (("point E = (1 : 1 + x_1 : y_1)", "point E = (1 : 1 + x_1 : y_1"), ParseError),
        (("var y_1 class generic", "var y_1 class wobbly"), ParseError),
        (("point D = (1 : 1 : 1)", "point D = (1 : 1 : 1)\nfrobnicate"), ParseError),
        (("point D = (1 : 1 : 1)", "point D = (0 : 0 : 0)"), ValidationError),
        (("point D = (1 : 1 : 1)", "point D = (1 : 1 : 1)\nfact 3: cr(A,B;C,D|E) = zero"), ValidationError),
        (("expect corank 2", "expect corank 2 span dq_1"), ValidationError),
    ],
)
def test_case_errors(mutation, error):
    old, new = mutation
    with pytest.raises(error):
        parse_case(SMALL.replace(old, new))


def test_every_bundled_file_round_trips():
    for path in corpus_files("all"):
        case = load_case(path)
        again = parse_case(format_case(case))
        assert case_structure(again) == case_structure(case), path.name


def test_bundled_lookup():
    assert bundled_case("F.1'").case_name == "F.1'"
    with pytest.raises(KeyError):
        bundled_case("Z.9")


def test_relabel_twice_is_identity():
    case = bundled_case("D")
    swap = {"C": "E", "E": "C", "B": "D", "D": "B"}
    back = relabel_case(relabel_case(case, swap), swap)
    assert case_structure(back) == case_structure(case)
