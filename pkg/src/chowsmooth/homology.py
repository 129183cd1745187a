"""The "coefficient is 1" check for the homology class of a generic orbit.

A summand of the class corresponds to a pattern of conditions on a 3x3
matrix M: a beta condition asks M p ~ q for points p, q (two linear
equations), an alpha condition asks <L, M p> = 0 for a point p and a line L
(one equation).  Eight equations on nine entries leave a one-dimensional
kernel for generic data, and the coefficient is 1 exactly when that kernel
is spanned by an invertible matrix.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .geometry import det3

PATTERNS = ((4, 0), (3, 2), (2, 4), (1, 6), (0, 8))


class PatternMismatch(ValueError):
    pass


class NonGenericData(ValueError):
    pass


@dataclass(frozen=True)
class ConditionPattern:
    beta_count: int
    alpha_count: int

    def __post_init__(self):
        if 2 * self.beta_count + self.alpha_count != 8 or self.beta_count < 0 or self.alpha_count < 0:
            raise PatternMismatch(f"2*{self.beta_count} + {self.alpha_count} != 8")

    @property
    def name(self):
        return f"{self.beta_count}b{self.alpha_count}a"


def all_patterns():
    return [ConditionPattern(b, a) for b, a in PATTERNS]


@dataclass
class TransportProblem:
    """beta: [(p, q)] point to point; alpha: [(p, L)] point to line."""

    beta: list = field(default_factory=list)
    alpha: list = field(default_factory=list)

    @property
    def pattern(self):
        return ConditionPattern(len(self.beta), len(self.alpha))


def _fr(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _row_for(p, w):
    """Coefficients of sum_r w_r (M p)_r in the entries m_{rc} (row-major)."""
    return [_fr(w[r]) * _fr(p[c]) for r in range(3) for c in range(3)]


def build_system(problem):
    """The 8x9 matrix of linear conditions on the entries of M."""
    problem.pattern  # raises PatternMismatch
    rows = []
    for p, q in problem.beta:
        k = next((i for i in range(3) if q[i] != 0), None)
        if k is None:
            raise ValueError("target point has all coordinates zero")
        # (M p)_i q_k - (M p)_k q_i = 0 for the two i != k
        for i in range(3):
            if i == k:
                continue
            w = [0, 0, 0]
            w[i] = q[k]
            w[k] = -q[i]
            rows.append(_row_for(p, w))
    for p, line in problem.alpha:
        rows.append(_row_for(p, line))
    return rows


def _domain(rows):
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (len(rows), 9), QQ)


def system_rank(rows):
    return _domain(rows).rank()


def kernel(rows):
    """Basis of the kernel as lists of Fractions."""
    ns = _domain(rows).nullspace()
    out = []
    for r in ns.to_Matrix().tolist():
        out.append([Fraction(int(x.p), int(x.q)) for x in r])
    return out


def as_matrix(vec):
    return [vec[0:3], vec[3:6], vec[6:9]]


def _apply(M, p):
    return [sum(M[r][c] * p[c] for c in range(3)) for r in range(3)]


def satisfies(problem, M):
    """Substitution check of every condition."""
    for p, q in problem.beta:
        Mp = _apply(M, p)
        if any(Mp[i] * q[j] - Mp[j] * q[i] for i in range(3) for j in range(3)):
            return False
        if not any(Mp):
            return False
    for p, line in problem.alpha:
        if sum(a * b for a, b in zip(line, _apply(M, p))):
            return False
    return True


def coefficient(problem):
    """1 if the kernel is spanned by an invertible matrix, 0 if by a singular one."""
    rows = build_system(problem)
    r = system_rank(rows)
    if r < 8:
        raise NonGenericData(f"system has rank {r} < 8")
    (vec,) = kernel(rows)
    M = as_matrix(vec)
    cols = [tuple(M[i][j] for i in range(3)) for j in range(3)]
    return 1 if det3(*cols) else 0


# ---------------------------------------------------------------- sampling

def _draw(rng, bound):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _vector(rng, bound):
    while True:
        v = [_draw(rng, bound) for _ in range(3)]
        if any(v):
            return v


def random_problem(pattern, rng, bound=97):
    return TransportProblem(
        beta=[(_vector(rng, bound), _vector(rng, bound)) for _ in range(pattern.beta_count)],
        alpha=[(_vector(rng, bound), _vector(rng, bound)) for _ in range(pattern.alpha_count)],
    )


def identity_problem():
    frame = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    frame = [[Fraction(x) for x in p] for p in frame]
    return TransportProblem(beta=[(p, p) for p in frame])


def singular_problem(rng, bound=97):
    """Eight alpha conditions all satisfied by a fixed rank-2 matrix."""
    while True:
        a, b = _vector(rng, bound), _vector(rng, bound)
        c = [a[i] + 2 * b[i] for i in range(3)]
        M0 = [a, b, c]  # third row dependent
        alpha = []
        for _ in range(8):
            p = _vector(rng, bound)
            Mp = _apply(M0, p)
            # a line through M0 p: cross with a random point
            r = _vector(rng, bound)
            L = [Mp[1] * r[2] - Mp[2] * r[1], Mp[2] * r[0] - Mp[0] * r[2], Mp[0] * r[1] - Mp[1] * r[0]]
            alpha.append((p, L))
        prob = TransportProblem(alpha=alpha)
        if system_rank(build_system(prob)) == 8:
            return prob, M0


def run_trials(pattern, trials=100, seed=0, bound=97, max_rejections=10000):
    """Draw generic instances (rejecting rank < 8) and tally coefficients."""
    rng = random.Random(f"{seed}:{pattern.name}")
    counts = {}
    rejected = 0
    unchecked = 0
    done = 0
    while done < trials:
        prob = random_problem(pattern, rng, bound)
        rows = build_system(prob)
        if system_rank(rows) < 8:
            rejected += 1
            if rejected > max_rejections:
                raise NonGenericData(f"pattern {pattern.name}: too many degenerate samples")
            continue
        c = coefficient(prob)
        (vec,) = kernel(rows)
        if not satisfies(prob, as_matrix(vec)):
            unchecked += 1
        counts[c] = counts.get(c, 0) + 1
        done += 1
    drawn = trials + rejected
    return {
        "pattern": pattern.name,
        "beta": pattern.beta_count,
        "alpha": pattern.alpha_count,
        "trials": trials,
        "coefficients": {str(k): v for k, v in sorted(counts.items())},
        "rejected": rejected,
        "rejection_rate": rejected / drawn,
        "substitution_failures": unchecked,
        "passed": counts.get(1, 0) == trials and unchecked == 0,
    }
