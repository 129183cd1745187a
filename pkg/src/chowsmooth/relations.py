"""Symbolic layer between the chart model and the verifier.

Evaluates invariant specs on charts with polynomial coordinates, clears
relations to a single polynomial, and solves the parameter constraints that
hold at the base point (the ``x_1 t_2 = 1`` kind), so that the base point of
a case is described by its free parameters only.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .invariants import Config, evaluate_raw
from .poly import (
    ConstantNonvanishing,
    RatFunc,
    VarName,
    format_poly,
    poly_eval_partial,
    var,
    variables_of,
)


class UnsolvableConstraint(ValueError):
    """A parameter constraint at the base point that is not linear in any parameter."""


@dataclass
class SymbolicValue:
    """A reduced num/den pair; den may vanish identically (then num is 0 or 1)."""

    num: object
    den: object

    @property
    def ratfunc(self):
        if not self.den:
            raise ZeroDivisionError("value is identically infinite or undefined")
        return RatFunc(self.num, self.den)

    def is_identically_undefined(self):
        return not self.num and not self.den

    def __str__(self):
        if not self.den:
            return "undef" if not self.num else "inf"
        return str(self.ratfunc)


def chart_config(chart):
    return Config(chart.points, chart.lines)


def symbolic_value(chart, spec):
    num, den = evaluate_raw(spec, chart_config(chart))
    R = chart.ring
    num = num if hasattr(num, "ring") else R(num)
    den = den if hasattr(den, "ring") else R(den)
    if not den:
        return SymbolicValue(R.one if num else R.zero, R.zero)
    rf = RatFunc(num, den)
    return SymbolicValue(rf.num, rf.den)


def side_value(case, side):
    """Value of one side of a relation: (chart_id, spec) or a RatFunc constant."""
    if isinstance(side, RatFunc):
        return SymbolicValue(side.num, side.den)
    chart_id, spec = side
    return symbolic_value(case.charts[chart_id], spec)


def cleared(case, relation):
    """P = N_l D_r - N_r D_l for a relation; raises if a side is degenerate."""
    lv = side_value(case, relation.lhs)
    rv = side_value(case, relation.rhs)
    if not lv.den or not rv.den:
        raise ValueError(f"relation {relation.label}: a side is identically degenerate")
    return lv.num * rv.den - rv.num * lv.den


# ---------------------------------------------------------------- evaluation with rational-function values

def eval_rat(P, assignment):
    """P with variables replaced by rationals or RatFuncs; returns a RatFunc."""
    R = P.ring
    numeric = {k: v for k, v in assignment.items() if not isinstance(v, RatFunc)}
    symbolic = {k: v for k, v in assignment.items() if isinstance(v, RatFunc)}
    P = poly_eval_partial(P, numeric)
    occurring = variables_of(P)
    symbolic = {k: v for k, v in symbolic.items() if k in occurring}
    if not symbolic:
        return RatFunc(P, reduce=False)
    gens = list(R.gens)
    idx = {str(g): i for i, g in enumerate(gens)}
    slots = [(idx[k], v) for k, v in symbolic.items()]
    degs = {i: max(m[i] for m in P.keys()) for i, _ in slots}
    pow_cache = {}

    def pw(i, which, e):
        if e == 0:
            return R.one  # sympy refuses 0**0
        key = (i, which, e)
        if key not in pow_cache:
            base = dict(slots)[i].num if which == "n" else dict(slots)[i].den
            pow_cache[key] = base ** e
        return pow_cache[key]

    total = R.zero
    for monom, coeff in P.items():
        rest = list(monom)
        term = R.one
        for i, _ in slots:
            e = monom[i]
            rest[i] = 0
            term = term * pw(i, "n", e) * pw(i, "d", degs[i] - e)
        total += R({tuple(rest): coeff}) * term
    den = R.one
    for i, _ in slots:
        den = den * pw(i, "d", degs[i])
    return RatFunc(total, den)


# ---------------------------------------------------------------- base point

@dataclass
class BasePoint:
    """Infinitesimals at 0, solved parameters as functions of the free ones."""

    infinitesimals: list
    parameters: list
    solved: dict = field(default_factory=dict)  # name -> RatFunc in free params
    constraints: list = field(default_factory=list)  # (label, text)

    @property
    def free(self):
        return [p for p in self.parameters if p not in self.solved]

    def assignment(self):
        a = {name: 0 for name in self.infinitesimals}
        a.update(self.solved)
        return a

    def at(self, P):
        """RatFunc value of a polynomial at the base point."""
        return eval_rat(P, self.assignment())


def _linear_candidates(c):
    R = c.ring
    out = []
    for name in sorted(variables_of(c)):
        g = var(R, name)
        i = R.gens.index(g)
        deg = max(m[i] for m in c.keys())
        if deg != 1:
            continue
        a = R.zero
        b = R.zero
        for monom, coeff in c.items():
            term = R({monom: coeff})
            if monom[i]:
                m = list(monom)
                m[i] = 0
                a += R({tuple(m): coeff})
            else:
                b += term
        out.append((name, a, b))
    return out


def _solve_order(item):
    name, a, _ = item
    v = VarName.parse(name)
    from .poly import BASE_ORDER

    rank = BASE_ORDER.index(v.base_name) if v.base_name in BASE_ORDER else -1
    # constant coefficient first, then t before z before y before x, later charts first
    return (0 if a.is_ground else 1, -rank, -v.chart_id)


def solve_base(infinitesimals, parameters, constraints):
    """Solve base-point constraints c(params) = 0 one linear variable at a time.

    ``constraints`` is a list of (label, polynomial) pairs, the polynomials
    being P(base) of the cleared relations.  Raises ConstantNonvanishing when
    a constraint reduces to a nonzero constant.
    """
    base = BasePoint(list(infinitesimals), list(parameters))
    pending = [(lab, c) for lab, c in constraints if c]
    while pending:
        reduced = []
        for lab, c in pending:
            val = eval_rat(c, base.solved) if base.solved else RatFunc(c, reduce=False)
            n = val.num
            if not n:
                continue
            if n.is_ground:
                raise ConstantNonvanishing(
                    f"relation {lab} does not vanish at the base point: reduces to {format_poly(n)}"
                )
            reduced.append((lab, n))
        if not reduced:
            break
        picked = None
        for lab, n in reduced:
            cands = [c for c in _linear_candidates(n) if c[1]]
            if cands:
                picked = (lab, n, min(cands, key=_solve_order))
                break
        if picked is None:
            lab, n = reduced[0]
            raise UnsolvableConstraint(f"relation {lab}: constraint {format_poly(n)} = 0 is not linear in a parameter")
        lab, n, (name, a, b) = picked
        value = RatFunc(-b, a)
        base.constraints.append((lab, f"{format_poly(n)} = 0  =>  {name} = {value}"))
        # keep every solved value expressed in free parameters only
        for k in list(base.solved):
            base.solved[k] = eval_rat_rf(base.solved[k], {name: value})
        base.solved[name] = value
        pending = [(l2, c2) for l2, c2 in reduced if l2 != lab or c2 != n]
    return base


def eval_rat_rf(rf, assignment):
    return eval_rat(rf.num, assignment) / eval_rat(rf.den, assignment)


def as_fraction_value(rf, sample):
    """Exact Fraction value of a RatFunc at a complete rational sample, or None."""
    v = rf.at(sample)
    if not v.is_finite:
        return None
    return v.value()


def to_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)
