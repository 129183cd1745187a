"""Randomized exact oracle for the symbolic layer.

Everything is evaluated at sampled rational points and compared exactly:
chart invariants against closed forms, the two sides of every relation
after solving for the non-sampled charts, and the dual computation routes of
the invariants module (identity suites, triple and cross-ratio routes).
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .charts import VarClass, draw_rational
from .geometry import ProjLine, ProjPoint, dot, in_general_position, join, meet
from .invariants import (
    BadTransversal,
    Config,
    CrossRatioSpec,
    TripleRatioSpec,
    ceva_ratio,
    check_identity_1,
    check_identity_2,
    cross_ratio_collinear,
    cross_ratio_pencil,
    cross_ratio_pencil_raw,
    evaluate,
    triple_ratio_cevian,
    triple_ratio_menelaus,
)
from .poly import RatFunc, make_ring, poly_eval_partial, ratfunc_equal, to_fraction, variables_of
from .relations import cleared, symbolic_value
from .scalars import Cmp, ExtScalar, ext_eq


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    trials: int = 100
    bound: int = 97

    def rng(self, salt=""):
        # string seeds go through sha512, so draws do not depend on PYTHONHASHSEED
        return random.Random(f"{self.seed}:{salt}")


# ---------------------------------------------------------------- evaluation at rational points

_GEN_NAMES = {}


def _names(R):
    names = _GEN_NAMES.get(id(R))
    if names is None:
        names = _GEN_NAMES[id(R)] = [str(g) for g in R.gens]
    return names


def eval_poly(p, values):
    """Fraction value of a polynomial; every occurring variable must be in ``values``."""
    if not p:
        return Fraction(0)
    names = _names(p.ring)
    total = Fraction(0)
    for monom, coeff in p.items():
        term = to_fraction(coeff)
        for i, e in enumerate(monom):
            if e:
                term *= values[names[i]] ** e
        total += term
    return total


def eval_ratfunc(rf, values):
    return ExtScalar(eval_poly(rf.num, values), eval_poly(rf.den, values))


def draw_value(rng, cls, bound):
    """A nonzero rational admissible for the class (infinitesimals included)."""
    while True:
        v = draw_rational(rng, bound)
        if v != 0 and cls.admits(v):
            return v


def concrete_config(chart, values):
    pts = {k: tuple(eval_poly(c, values) for c in p) for k, p in chart.points.items()}
    for k, p in pts.items():
        if not any(p):
            raise ValueError(f"point {k} vanishes at the sample")
    lines = {}
    for key, ln in chart.lines.items():
        v = tuple(eval_poly(c, values) for c in ln)
        if any(v):
            lines[key] = v
    return Config(pts, lines)


def _side_value(case, side, values, cache):
    """Geometric value when the whole chart is known, else its symbolic value at ``values``."""
    if isinstance(side, RatFunc):
        return eval_ratfunc(side, values)
    cid, spec = side
    chart = case.charts[cid]
    if all(v in values for v in chart.variables):
        return evaluate(spec, concrete_config(chart, values))
    key = (cid, str(spec))
    if key not in cache:
        cache[key] = symbolic_value(chart, spec)
    sv = cache[key]
    return ExtScalar(eval_poly(sv.num, values), eval_poly(sv.den, values))


def _side_vars(case, side):
    if isinstance(side, RatFunc):
        return variables_of(side.num) | variables_of(side.den)
    return set(case.charts[side[0]].variables)


def _fmt_values(values):
    return {k: str(v) for k, v in sorted(values.items())}


# ---------------------------------------------------------------- formulas

def validate_formula(chart, spec, expected, cfg, max_rejections=None):
    """Compare a chart invariant with a closed form at ``cfg.trials`` samples."""
    rng = cfg.rng(f"formula:{chart.chart_id}:{spec}:{expected}")
    limit = max_rejections if max_rejections is not None else 20 * cfg.trials
    names = sorted(chart.variables)
    agreed = rejected = 0
    counterexample = None
    while agreed < cfg.trials and counterexample is None:
        values = {n: draw_value(rng, chart.variables[n], cfg.bound) for n in names}
        try:
            got = evaluate(spec, concrete_config(chart, values))
        except ValueError:
            got = ExtScalar.undefined()
        want = eval_ratfunc(expected, values)
        cmp = ext_eq(got, want)
        if cmp is Cmp.EQUAL:
            agreed += 1
        elif cmp is Cmp.UNEQUAL:
            counterexample = {"values": _fmt_values(values), "invariant": str(got), "expected": str(want)}
        else:
            rejected += 1
            if rejected > limit:
                break
    return {
        "chart": chart.chart_id,
        "spec": str(spec),
        "expected": str(expected),
        "trials": cfg.trials,
        "agreed": agreed,
        "rejected": rejected,
        "counterexample": counterexample,
        "passed": agreed == cfg.trials and counterexample is None,
    }


def validate_case_formulas(case, cfg, published_only=False):
    out = []
    for f in case.formulas:
        if published_only and not f.published:
            continue
        rep = validate_formula(case.charts[f.chart_id], f.spec, f.expected, cfg)
        rep["published"] = f.published
        out.append(rep)
    return out


# ---------------------------------------------------------------- cross-chart agreement

def _linear_in(Q, name):
    """(a, b) with Q = a*name + b when Q has degree 1 in ``name``, else None."""
    i = _names(Q.ring).index(name)
    a = Q.ring.zero
    b = Q.ring.zero
    for monom, coeff in Q.items():
        e = monom[i]
        if e > 1:
            return None
        m = list(monom)
        m[i] = 0
        term = Q.ring({tuple(m): coeff})
        if e:
            a += term
        else:
            b += term
    return a, b


def _solve_chain(case, polys, values):
    """Triangular solve: returns (values, roles) with roles[i] = 'solve:<var>' | 'check' | None."""
    values = dict(values)
    roles = [None] * len(polys)
    progress = True
    while progress:
        progress = False
        for i, P in enumerate(polys):
            if roles[i] is not None:
                continue
            Q = poly_eval_partial(P, values)
            left = variables_of(Q)
            if not left:
                roles[i] = "check"
                progress = True
                continue
            if len(left) != 1:
                continue
            (name,) = left
            ab = _linear_in(Q, name)
            if ab is None:
                continue
            a, b = (to_fraction(x.LC) if x else Fraction(0) for x in ab)
            if a == 0:
                continue
            values[name] = -b / a
            roles[i] = f"solve:{name}"
            progress = True
    return values, roles


def _charts_generic(case, values):
    """Every fully known chart is a configuration in general position.

    The charts are birational coordinates on one family; off general position
    the transition maps are not defined and a sample says nothing.
    """
    for chart in case.charts.values():
        if not all(v in values for v in chart.variables):
            continue
        pts = [tuple(eval_poly(c, values) for c in p) for p in chart.points.values()]
        if not in_general_position(pts):
            return False
    return True


def _sample_sets(case):
    if case.sample_vars:
        return [("declared", list(case.sample_vars))]
    return [(f"chart {cid}", sorted(ch.variables)) for cid, ch in case.charts.items()]


def _choose_sample_set(case, polys, cfg):
    """The declared sample variables, else the chart whose variables resolve most relations."""
    options = _sample_sets(case)
    if len(options) == 1:
        return options[0]
    best = None
    classes = case.variables
    for label, names in options:
        rng = cfg.rng(f"choose:{label}")
        values = {n: draw_value(rng, classes[n], cfg.bound) for n in names}
        _, roles = _solve_chain(case, polys, values)
        score = sum(r is not None for r in roles)
        if best is None or score > best[0]:
            best = (score, label, names)
    return best[1], best[2]


def cross_chart_agreement(case, cfg, max_rejections=None):
    """Sample one chart (or the declared variables), solve the rest, compare every relation."""
    polys = [cleared(case, r) for r in case.relations]
    needed = [_side_vars(case, r.lhs) | _side_vars(case, r.rhs) for r in case.relations]
    label, names = _choose_sample_set(case, polys, cfg)
    classes = case.variables
    rng = cfg.rng(f"agreement:{case.case_name}")
    limit = max_rejections if max_rejections is not None else 20 * cfg.trials
    n = len(case.relations)
    equal = [0] * n
    roles_seen = [None] * n
    accepted = rejected = 0
    failure = None
    cache = {}
    while accepted < cfg.trials and failure is None:
        values = {v: draw_value(rng, classes[v], cfg.bound) for v in names}
        values, roles = _solve_chain(case, polys, values)
        ok = all(
            classes[v] is VarClass.INFINITESIMAL or classes[v].admits(x) for v, x in values.items()
        ) and _charts_generic(case, values)
        results = []
        if ok:
            for i, rel in enumerate(case.relations):
                if roles[i] is None:
                    results.append(None)
                    continue
                try:
                    if needed[i] <= values.keys():
                        cmp = ext_eq(
                            _side_value(case, rel.lhs, values, cache), _side_value(case, rel.rhs, values, cache)
                        )
                    else:
                        # the relation no longer sees the missing variables: use the cleared form
                        cmp = Cmp.UNEQUAL if poly_eval_partial(polys[i], values) else Cmp.EQUAL
                except ValueError:
                    cmp = Cmp.INCOMPARABLE
                results.append(cmp)
                if cmp is Cmp.INCOMPARABLE:
                    ok = False
        if not ok:
            rejected += 1
            if rejected > limit:
                break
            continue
        for i, cmp in enumerate(results):
            if cmp is None:
                continue
            if cmp is Cmp.UNEQUAL and failure is None:
                failure = {"relation": case.relations[i].text(), "values": _fmt_values(values)}
            if cmp is Cmp.EQUAL:
                equal[i] += 1
        if roles_seen[0] is None or accepted == 0:
            roles_seen = roles
        accepted += 1
    statuses = []
    for i, rel in enumerate(case.relations):
        role = roles_seen[i] if accepted else None
        statuses.append(
            {
                "label": rel.label,
                "relation": rel.text(),
                "role": role or "unresolvable",
                "agreed": equal[i],
            }
        )
    unresolvable = [s["relation"] for s in statuses if s["role"] == "unresolvable"]
    passed = (
        failure is None
        and accepted == cfg.trials
        and all(s["agreed"] == cfg.trials for s in statuses if s["role"] != "unresolvable")
    )
    return {
        "case": case.case_name,
        "sampled": label,
        "sampled_variables": list(names),
        "trials": cfg.trials,
        "accepted": accepted,
        "rejected": rejected,
        "relations": statuses,
        "unresolvable": unresolvable,
        "checked": sum(1 for s in statuses if s["role"] == "check"),
        "failure": failure,
        "passed": passed,
    }


# ---------------------------------------------------------------- random configurations

def _point(rng, bound):
    while True:
        p = tuple(draw_rational(rng, bound) for _ in range(3))
        if any(p):
            return p


def random_config(rng, labels="ABCDEF", bound=97):
    return Config({x: _point(rng, bound) for x in labels})


def _tally(outcomes):
    out = {"equal": 0, "unequal": 0, "incomparable": 0}
    for c in outcomes:
        out[c.value if hasattr(c, "value") else c] += 1
    return out


def identity_suite(which, cfg):
    """The five-point (which=1) or six-point (which=2) product identity on random configurations."""
    rng = cfg.rng(f"identity:{which}")
    check = check_identity_1 if which == 1 else check_identity_2
    labels = "ABCDE" if which == 1 else "ABCDEF"
    outcomes = []
    first = None
    for _ in range(cfg.trials):
        conf = random_config(rng, labels, cfg.bound)
        c = check(conf)
        outcomes.append(c)
        if c is Cmp.UNEQUAL and first is None:
            first = {k: repr(conf[k]) for k in labels}
    t = _tally(outcomes)
    return {
        "suite": f"identity-{which}",
        "trials": cfg.trials,
        **t,
        "counterexample": first,
        "passed": t["equal"] == cfg.trials,
    }


def _random_transversal(rng, pts, bound):
    while True:
        T = _point(rng, bound)
        if all(dot(T, p) for p in pts):
            return T


def triple_route_suite(cfg):
    """Cevian route against the Menelaus product with a random transversal."""
    rng = cfg.rng("triple-routes")
    spec = TripleRatioSpec(("A", "B", "C"), ("D", "E", "F"))
    agree = disagree = rejected = 0
    first = None
    while agree + disagree < cfg.trials:
        conf = random_config(rng, "ABCDEF", cfg.bound)
        T = _random_transversal(rng, [conf[x] for x in "ABC"], cfg.bound)
        try:
            a = triple_ratio_cevian(spec, conf)
            b = triple_ratio_menelaus(spec, T, conf)
        except (ValueError, BadTransversal):
            rejected += 1
            continue
        c = ext_eq(a, b)
        if c is Cmp.EQUAL:
            agree += 1
        elif c is Cmp.UNEQUAL:
            disagree += 1
            first = first or {"cevian": str(a), "menelaus": str(b)}
        else:
            rejected += 1
    return {
        "suite": "triple-routes",
        "trials": cfg.trials,
        "agreed": agree,
        "disagreed": disagree,
        "rejected": rejected,
        "counterexample": first,
        "passed": agree == cfg.trials,
    }


def _on_line(rng, p, q, bound):
    """A random point of the line pq other than p and q."""
    while True:
        s = draw_rational(rng, bound)
        if s != 0:
            return tuple(a + s * b for a, b in zip(p, q))


def ceva_menelaus_suite(cfg):
    """Concurrent cevians give 1, collinear feet give -1, on both routes."""
    rng = cfg.rng("ceva-menelaus")
    spec = TripleRatioSpec(("A", "B", "C"), ("D", "E", "F"))
    one = ExtScalar(1)
    minus_one = ExtScalar(-1)
    counts = {"ceva": 0, "menelaus": 0, "ceva_ratio": 0}
    rejected = 0
    bad = None
    done = 0
    while done < cfg.trials:
        A, B, C = (_point(rng, cfg.bound) for _ in range(3))
        O = _point(rng, cfg.bound)
        T = _point(rng, cfg.bound)
        try:
            # Ceva: targets on the lines through a common point O
            pts = {"A": A, "B": B, "C": C}
            pts["D"] = _on_line(rng, A, O, cfg.bound)
            pts["E"] = _on_line(rng, B, O, cfg.bound)
            pts["F"] = _on_line(rng, C, O, cfg.bound)
            conf = Config(pts)
            trn = _random_transversal(rng, [A, B, C], cfg.bound)
            ceva_ok = ext_eq(triple_ratio_cevian(spec, conf), one) is Cmp.EQUAL and ext_eq(
                triple_ratio_menelaus(spec, trn, conf), one
            ) is Cmp.EQUAL
            # the feet themselves, for the Ceva ratio of the sides
            feet = {
                "A": A, "B": B, "C": C,
                "D": tuple(meet(join(ProjPoint(*A), ProjPoint(*O)), join(ProjPoint(*B), ProjPoint(*C)))),
                "E": tuple(meet(join(ProjPoint(*B), ProjPoint(*O)), join(ProjPoint(*C), ProjPoint(*A)))),
                "F": tuple(meet(join(ProjPoint(*C), ProjPoint(*O)), join(ProjPoint(*A), ProjPoint(*B)))),
            }
            ratio_ok = ext_eq(ceva_ratio(Config(feet)), one) is Cmp.EQUAL
            # Menelaus: the feet on the sides lie on the line T
            mp = {"A": A, "B": B, "C": C}
            Pp = tuple(meet(ProjPoint(*T), join(ProjPoint(*B), ProjPoint(*C))))
            Qp = tuple(meet(ProjPoint(*T), join(ProjPoint(*C), ProjPoint(*A))))
            Rp = tuple(meet(ProjPoint(*T), join(ProjPoint(*A), ProjPoint(*B))))
            mp["D"] = _on_line(rng, A, Pp, cfg.bound)
            mp["E"] = _on_line(rng, B, Qp, cfg.bound)
            mp["F"] = _on_line(rng, C, Rp, cfg.bound)
            mconf = Config(mp)
            trn2 = _random_transversal(rng, [A, B, C], cfg.bound)
            men_ok = ext_eq(triple_ratio_cevian(spec, mconf), minus_one) is Cmp.EQUAL and ext_eq(
                triple_ratio_menelaus(spec, trn2, mconf), minus_one
            ) is Cmp.EQUAL
        except (ValueError, BadTransversal):
            rejected += 1
            continue
        counts["ceva"] += ceva_ok
        counts["menelaus"] += men_ok
        counts["ceva_ratio"] += ratio_ok
        if not (ceva_ok and men_ok and ratio_ok) and bad is None:
            bad = {"A": A, "B": B, "C": C, "O": O, "T": T}
        done += 1
    return {
        "suite": "ceva-menelaus",
        "trials": cfg.trials,
        **counts,
        "rejected": rejected,
        "counterexample": None if bad is None else {k: [str(x) for x in v] for k, v in bad.items()},
        "passed": all(v == cfg.trials for v in counts.values()),
    }


def pencil_route_suite(cfg):
    """Determinant pencil against the collinear cross-ratio on a random line."""
    rng = cfg.rng("pencil-routes")
    spec = CrossRatioSpec("A", "B", "C", "D", "E")
    agree = disagree = rejected = 0
    first = None
    while agree + disagree < cfg.trials:
        conf = random_config(rng, "ABCDE", cfg.bound)
        E = conf["E"]
        ell = _point(rng, cfg.bound)
        if not dot(ell, E):
            rejected += 1
            continue
        try:
            feet = [meet(join(E, conf[x]), ProjLine(*ell)) for x in "ABCD"]
            a = cross_ratio_pencil(spec, conf)
            b = cross_ratio_collinear(*feet)
        except ValueError:
            rejected += 1
            continue
        c = ext_eq(a, b)
        if c is Cmp.EQUAL:
            agree += 1
        elif c is Cmp.UNEQUAL:
            disagree += 1
            first = first or {"pencil": str(a), "collinear": str(b)}
        else:
            rejected += 1
    return {
        "suite": "pencil-routes",
        "trials": cfg.trials,
        "agreed": agree,
        "disagreed": disagree,
        "rejected": rejected,
        "counterexample": first,
        "passed": agree == cfg.trials,
    }


def coordinate_example():
    """[A,B;P,D]_C on the standard frame with P = (x:y:z), symbolically.

    Ring variables carry a chart index, so x, y, z appear as x_1, y_1, z_1.
    """
    R = make_ring(["x_1", "y_1", "z_1"])
    x, y, z = R.gens
    one, zero = R.one, R.zero
    conf = Config(
        {
            "A": (one, zero, zero),
            "B": (zero, one, zero),
            "C": (zero, zero, one),
            "P": (x, y, z),
            "D": (one, one, one),
        }
    )
    num, den = cross_ratio_pencil_raw(CrossRatioSpec("A", "B", "P", "D", "C"), conf)
    value = RatFunc(num, den)
    expected = RatFunc(y, x)
    return {"value": str(value), "expected": str(expected), "passed": ratfunc_equal(value, expected)}


def run_identities(cfg):
    """All dual-route suites with the trial count of ``cfg``."""
    return [
        identity_suite(1, cfg),
        identity_suite(2, cfg),
        triple_route_suite(cfg),
        ceva_menelaus_suite(cfg),
        pencil_route_suite(cfg),
        {"suite": "coordinate-example", **coordinate_example()},
    ]
