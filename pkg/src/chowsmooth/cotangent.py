"""Cotangent corank of a case at its base point.

Every relation is cleared to a polynomial P in all chart variables.  Its
value at the base point (infinitesimals at 0) is a polynomial in the
parameters; nonzero ones are constraints on the parameters and are solved
first.  The linear part of P at the base point, over the differentials of
*all* chart variables, gives one row.  The rank of these rows over the
field of rational functions in the free parameters is computed by
fraction-free elimination; each pivot is certified nonzero at an admissible
rational sample.
"""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .charts import SampleRejected, VarClass, sample_parameters
from .poly import (
    ConstantNonvanishing,
    RatFunc,
    format_poly,
    poly_eval_partial,
    to_fraction,
    total_degree,
    var,
    variables_of,
)
from .relations import UnsolvableConstraint, cleared, solve_base

DEFAULT_SAMPLE_RETRIES = 50


class PivotUncertifiable(RuntimeError):
    pass


class RelationError(ValueError):
    """Wraps a failure while building one relation row."""

    def __init__(self, label, exc):
        self.label = label
        self.cause = exc
        super().__init__(f"relation {label}: {type(exc).__name__}: {exc}")


# ---------------------------------------------------------------- clearing and base point

def _strip_monomial_content(P):
    """Divide out the largest monomial dividing every term."""
    if not P:
        return P, ()
    n = P.ring.ngens
    low = [min(m[i] for m in P.keys()) for i in range(n)]
    if not any(low):
        return P, ()
    R = P.ring
    mono = R({tuple(low): 1})
    names = tuple(str(R.gens[i]) for i in range(n) if low[i])
    return P.exquo(mono), names


def cleared_relations(case, relations=None):
    """[(relation, P, stripped_monomial_vars)] with P the cleared polynomial."""
    relations = case.relations if relations is None else relations
    out = []
    for rel in relations:
        try:
            P = cleared(case, rel)
        except Exception as exc:
            raise RelationError(rel.label, exc) from None
        P, stripped = _strip_monomial_content(P)
        out.append((rel, P, stripped))
    return out


def case_base(case, relations=None):
    """Solve the base-point constraints of the case's relations (cached)."""
    relations = case.relations if relations is None else relations
    key = ("base", len(relations), tuple(r.label for r in relations))
    cache = case.__dict__.setdefault("_cache", {})
    if key in cache:
        return cache[key]
    zero = {v: 0 for v in case.infinitesimals}
    constraints = []
    for rel, P, _ in _cleared_cached(case, relations):
        c = poly_eval_partial(P, zero)
        if c:
            constraints.append((rel.label, c))
    base = solve_base(case.infinitesimals, case.parameters, constraints)
    cache[key] = base
    return base


def _cleared_cached(case, relations):
    cache = case.__dict__.setdefault("_cache", {})
    key = ("cleared", len(relations), tuple(r.label for r in relations))
    if key not in cache:
        cache[key] = cleared_relations(case, relations)
    return cache[key]


# ---------------------------------------------------------------- matrix

@dataclass
class RelationMatrix:
    columns: list  # variable names, one differential each
    rows: list  # list of lists of polynomials (denominators cleared)
    row_labels: list
    row_denominators: list  # polynomials that were cleared from each row
    parameter_vars: list  # free parameters the entries depend on
    base: object
    statuses: list = field(default_factory=list)  # per relation dicts


def _row_entries(P, columns, base):
    R = P.ring
    occurring = variables_of(P)
    entries = []
    for name in columns:
        if name not in occurring:
            entries.append(RatFunc(R.zero, reduce=False))
            continue
        d = P.diff(var(R, name))
        entries.append(base.at(d))
    return entries


def _clear_row(entries):
    R = entries[0].ring
    den = R.one
    for e in entries:
        if e.num and e.den != 1:
            den = den.lcm(e.den)
    row = [e.num * den.exquo(e.den) if e.num else R.zero for e in entries]
    # remove the content so the row stays small
    nz = [x for x in row if x]
    if nz:
        g = nz[0]
        for x in nz[1:]:
            g = g.gcd(x)
            if g == 1:
                break
        if g != 1 and not g.is_ground:
            row = [x.exquo(g) if x else x for x in row]
            den = den * g
    return row, den


def build_relations(case, relations=None, columns=None):
    """Linearize every relation at the base point.

    Raises ConstantNonvanishing (from the base solver) when some relation
    fails at the base point, RelationError when a side cannot be evaluated.
    """
    relations = case.relations if relations is None else relations
    columns = list(columns or case.variable_names)
    cl = _cleared_cached(case, relations)
    base = case_base(case, relations)
    rows, labels, dens, statuses = [], [], [], []
    for rel, P, stripped in cl:
        entries = _row_entries(P, columns, base)
        status = {"label": rel.label, "relation": rel.text(), "origin": rel.origin}
        if stripped:
            status["stripped"] = list(stripped)
        if all(e.is_zero() for e in entries):
            status["row"] = "empty"
            statuses.append(status)
            continue
        row, den = _clear_row(entries)
        status["row"] = "kept"
        rows.append(row)
        labels.append(rel.label)
        dens.append(den)
        statuses.append(status)
    return RelationMatrix(columns, rows, labels, dens, base.free, base, statuses)


# ---------------------------------------------------------------- elimination

def _eval_poly(p, sample):
    q = poly_eval_partial(p, sample)
    if not q:
        return Fraction(0)
    if not q.is_ground:
        raise ValueError("sample misses a parameter")
    return to_fraction(q.LC)


@dataclass
class CotangentReport:
    case_name: str
    n_differentials: int
    rank: int
    corank: int
    spanning_differentials: list
    pivot_ledger: list
    columns: list
    base_constraints: list = field(default_factory=list)
    free_parameters: list = field(default_factory=list)
    statuses: list = field(default_factory=list)
    sampled_ranks: list = field(default_factory=list)
    expected_corank: object = None
    expected_spanning: list = field(default_factory=list)
    spanning_ok: object = None
    passed: bool = False
    seconds: float = 0.0
    error: str = ""

    def to_dict(self):
        return {
            "case": self.case_name,
            "passed": self.passed,
            "n_differentials": self.n_differentials,
            "rank": self.rank,
            "corank": self.corank,
            "expected_corank": self.expected_corank,
            "spanning": ["d" + v for v in self.spanning_differentials],
            "expected_spanning": ["d" + v for v in self.expected_spanning],
            "spanning_ok": self.spanning_ok,
            "free_parameters": self.free_parameters,
            "base_constraints": self.base_constraints,
            "sampled_ranks": self.sampled_ranks,
            "pivot_ledger": self.pivot_ledger,
            "relations": self.statuses,
            "error": self.error,
        }


class _Sampler:
    """Admissible parameter samples, drawn lazily and reused across pivots."""

    def __init__(self, case, base, rng, bound, row_dens):
        self.case = case
        self.base = base
        self.rng = rng
        self.bound = bound
        self.row_dens = row_dens
        self.samples = []

    def draw(self):
        for _ in range(DEFAULT_SAMPLE_RETRIES):
            s = sample_parameters(self.case, self.rng, self.bound, self.base)
            free = {k: v for k, v in s.items() if k in self.base.free}
            if all(_eval_poly(d, free) for d in self.row_dens):
                self.samples.append(free)
                return free
        raise SampleRejected("row denominators vanish at every admissible sample")

    def certify(self, p):
        tried = 0
        for s in self.samples:
            tried += 1
            if _eval_poly(p, s):
                return s
        while tried < DEFAULT_SAMPLE_RETRIES:
            tried += 1
            s = self.draw()
            if _eval_poly(p, s):
                return s
        raise PivotUncertifiable(f"pivot {format_poly(p)} vanishes at every admissible sample tried")


def bareiss_rank(rows, ncols, preferred_last=(), certify=None):
    """Fraction-free elimination with full pivoting.

    Pivot choice: columns outside ``preferred_last`` first, then minimal
    total degree, then fewest terms, then position.  Returns
    (rank, pivot_columns, pivots).
    """
    M = [list(r) for r in rows]
    if not M:
        return 0, [], []
    R = next((x.ring for r in M for x in r if hasattr(x, "ring")), None)
    last = set(preferred_last)
    active_rows = set(range(len(M)))
    active_cols = set(range(ncols))
    prev = None
    pivots, pivot_cols = [], []
    while True:
        best = None
        for c in sorted(active_cols):
            for r in sorted(active_rows):
                x = M[r][c]
                if not x:
                    continue
                key = (c in last, total_degree(x), len(x), c, r)
                if best is None or key < best[0]:
                    best = (key, r, c)
        if best is None:
            break
        _, pr, pc = best
        p = M[pr][pc]
        if certify is not None:
            certify(p)
        pivots.append(p)
        pivot_cols.append(pc)
        active_rows.discard(pr)
        active_cols.discard(pc)
        for i in active_rows:
            a_ic = M[i][pc]
            row = M[i]
            prow = M[pr]
            for j in active_cols:
                v = p * row[j]
                if a_ic:
                    v = v - a_ic * prow[j]
                if prev is not None and v:
                    v = v.exquo(prev)
                row[j] = v
            row[pc] = R.zero if R is not None else 0
        prev = p
    return len(pivots), pivot_cols, pivots


def rank_over_q(rows):
    """Plain Gaussian elimination over Q (Fractions)."""
    M = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pv = M[rank][c]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / pv
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def sampled_rank(matrix, sample):
    rows = [[_eval_poly(x, sample) if x else Fraction(0) for x in r] for r in matrix.rows]
    return rank_over_q(rows)


def corank(matrix, case=None, seed=0, bound=97, preferred_last=(), samples=3):
    """Rank/corank with pivot ledger and the sampled-rank cross-check."""
    rng = random.Random(seed)
    sampler = None
    ledger = []
    if case is not None:
        sampler = _Sampler(case, matrix.base, rng, bound, matrix.row_denominators)

    def certify(p):
        if sampler is None:
            return
        s = sampler.certify(p)
        ledger.append(
            {
                "pivot": format_poly(p) if len(p) <= 12 else f"<{len(p)} terms, degree {total_degree(p)}>",
                "sample": {k: str(v) for k, v in sorted(s.items())},
            }
        )

    idx = {name: i for i, name in enumerate(matrix.columns)}
    pref = [idx[v] for v in preferred_last if v in idx]
    rank, pcols, _ = bareiss_rank(matrix.rows, len(matrix.columns), pref, certify)
    spanning = [matrix.columns[c] for c in range(len(matrix.columns)) if c not in set(pcols)]
    sampled = []
    if sampler is not None:
        for _ in range(samples):
            s = sampler.draw()
            sampled.append(sampled_rank(matrix, s))
    return rank, spanning, ledger, sampled


def spanning_is_basis(matrix, candidate):
    """True when the candidate differentials span the cotangent quotient.

    Equivalent to: the columns outside the candidate already carry the full
    rank of the relation matrix.
    """
    cand = set(candidate)
    keep = [i for i, c in enumerate(matrix.columns) if c not in cand]
    sub = [[r[i] for i in keep] for r in matrix.rows]
    full, _, _ = bareiss_rank(matrix.rows, len(matrix.columns))
    part, _, _ = bareiss_rank(sub, len(keep))
    return part == full


# ---------------------------------------------------------------- driver

def verify_case(case, seed=0, bound=97, relations=None):
    """Build, eliminate and compare with the case's expectations.

    Returns (passed, CotangentReport).  Expectation-free cases (the Y5
    scenarios) pass when the computation itself succeeds.
    """
    t0 = time.perf_counter()
    cols = case.variable_names
    rep = CotangentReport(
        case_name=case.case_name,
        n_differentials=len(cols),
        rank=0,
        corank=len(cols),
        spanning_differentials=[],
        pivot_ledger=[],
        columns=cols,
        expected_corank=case.expected_corank,
        expected_spanning=list(case.expected_spanning),
    )
    try:
        matrix = build_relations(case, relations)
        rep.statuses = matrix.statuses
        rep.free_parameters = list(matrix.parameter_vars)
        rep.base_constraints = [
            {"relation": lab, "solution": text} for lab, text in matrix.base.constraints
        ]
        rank, spanning, ledger, sampled = corank(
            matrix, case, seed=seed, bound=bound, preferred_last=case.expected_spanning
        )
    except (ConstantNonvanishing, UnsolvableConstraint, PivotUncertifiable, RelationError, SampleRejected) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.seconds = time.perf_counter() - t0
        return False, rep
    rep.rank = rank
    rep.corank = len(cols) - rank
    rep.spanning_differentials = spanning
    rep.pivot_ledger = ledger
    rep.sampled_ranks = sampled
    ok = all(s == rank for s in sampled)
    if not ok:
        rep.error = f"SampledRankMismatch: sampled ranks {sampled} disagree with generic rank {rank}"
    if case.expected_corank is not None and rep.corank != case.expected_corank:
        ok = False
        rep.error = rep.error or f"CorankMismatch: corank {rep.corank} != expected {case.expected_corank}"
    if case.expected_spanning:
        if set(spanning) == set(case.expected_spanning):
            rep.spanning_ok = True
        else:
            rep.spanning_ok = len(case.expected_spanning) == rep.corank and spanning_is_basis(
                matrix, case.expected_spanning
            )
        if not rep.spanning_ok:
            ok = False
            rep.error = rep.error or "SpanningMismatch: expected spanning set is not a basis of the cotangent space"
    rep.passed = ok
    rep.seconds = time.perf_counter() - t0
    return ok, rep


def declared_labels(case):
    """Labels of the relation lines as written, in file order."""
    out = []
    for r in case.relations:
        base = r.label.split("^")[0]
        if base not in out:
            out.append(base)
    return out


def ablate(case, index):
    """Relation list with declared line ``index`` removed, symmetric images included.

    This is what deleting that line from the case file does.
    """
    labels = declared_labels(case)
    if not 0 <= index < len(labels):
        raise IndexError(f"relation line {index} out of range (case declares {len(labels)})")
    gone = labels[index]
    return [r for r in case.relations if r.label.split("^")[0] != gone]


def is_infinitesimal(case, name):
    return case.variables[name] is VarClass.INFINITESIMAL


# ---------------------------------------------------------------- saturation

def _pencil_specs():
    from itertools import combinations

    from .charts import LABELS
    from .invariants import CrossRatioSpec

    for center in LABELS:
        others = [x for x in LABELS if x != center]
        for a, b, c, d in combinations(others, 4):
            yield CrossRatioSpec(a, b, c, d, center)


def saturating_relations(case):
    """Extra relations: every pencil cross-ratio defined on two charts.

    One ordering per 4-subset suffices, the other orderings clear to the same
    polynomial up to sign.  Pairs already related in the case are skipped.
    """
    from itertools import combinations

    from .charts import Relation
    from .relations import symbolic_value

    have = set()
    for rel in case.relations:
        if isinstance(rel.rhs, RatFunc):
            continue
        have.add((frozenset((rel.lhs[0], rel.rhs[0])), str(rel.lhs[1]), str(rel.rhs[1])))
    values = {}
    for cid, chart in case.charts.items():
        for spec in _pencil_specs():
            try:
                v = symbolic_value(chart, spec)
            except Exception:
                continue
            if v.den and not (v.num.is_ground and v.den.is_ground):
                values[(cid, str(spec))] = spec
    extra = []
    ids = list(case.charts)
    for i, j in combinations(ids, 2):
        for spec in _pencil_specs():
            s = str(spec)
            if (i, s) not in values or (j, s) not in values:
                continue
            if (frozenset((i, j)), s, s) in have:
                continue
            extra.append(Relation((i, spec), (j, spec), label=f"S{i}-{j}:{s}", origin="saturate"))
    return extra
