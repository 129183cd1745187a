"""Cross-ratios, triple ratios, the Ceva ratio and the two product identities.

Conventions:
  collinear   [A,B;C,D] = (AC/BC) : (AD/BD), so u = [0,inf;u,1]
  pencil      [A,B;C,D]_E = |A,C,E| |B,D,E| / (|B,C,E| |A,D,E|)
  triple      {A,B,C;P,Q,R} = AR'.BP'.CQ' / (R'B.P'C.Q'A)
              with P' = AP n BC, Q' = BQ n CA, R' = CR n AB

A label that coincides with the center (or with the vertex of its cevian)
needs the attached line l_{i,j}; the determinant factor is then replaced by
the incidence form of that line.  Every routine works on a ``Config`` whose
coordinates are Fractions or polynomials, and returns a raw (num, den) pair;
``evaluate`` wraps that as an ExtScalar for concrete data.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

from .geometry import ProjLine, ProjPoint, cross, det3, dot, join, meet, minors
from .scalars import Cmp, ExtScalar, ext_eq, ext_mul

log = logging.getLogger(__name__)

LABELS = "ABCDEF"


class MissingLine(ValueError):
    pass


class DegenerateTriangle(ValueError):
    pass


class BadTransversal(ValueError):
    pass


class NotCollinear(ValueError):
    pass


class PointOffSide(ValueError):
    pass


# ---------------------------------------------------------------- specs

@dataclass(frozen=True)
class CrossRatioSpec:
    a: str
    b: str
    c: str
    d: str
    center: str

    def __post_init__(self):
        labels = (self.a, self.b, self.c, self.d, self.center)
        if len(set(labels)) != 5:
            raise ValueError(f"cross-ratio labels must be distinct: {labels}")

    @property
    def labels(self):
        return (self.a, self.b, self.c, self.d, self.center)

    def relabel(self, mapping):
        return CrossRatioSpec(*(mapping.get(x, x) for x in self.labels))

    def __str__(self):
        return f"cr({self.a},{self.b};{self.c},{self.d}|{self.center})"


@dataclass(frozen=True)
class TripleRatioSpec:
    triangle: tuple
    targets: tuple

    def __post_init__(self):
        labels = tuple(self.triangle) + tuple(self.targets)
        if len(labels) != 6 or len(set(labels)) != 6:
            raise ValueError(f"triple-ratio labels must be six distinct labels: {labels}")

    @property
    def labels(self):
        return tuple(self.triangle) + tuple(self.targets)

    def relabel(self, mapping):
        m = lambda x: mapping.get(x, x)  # noqa: E731
        return TripleRatioSpec(tuple(map(m, self.triangle)), tuple(map(m, self.targets)))

    def __str__(self):
        a, b, c = self.triangle
        p, q, r = self.targets
        return f"tr({a},{b},{c};{p},{q},{r})"


_CR_RE = re.compile(r"^cr\(\s*(\w)\s*,\s*(\w)\s*;\s*(\w)\s*,\s*(\w)\s*\|\s*(\w)\s*\)$")
_TR_RE = re.compile(r"^tr\(\s*(\w)\s*,\s*(\w)\s*,\s*(\w)\s*;\s*(\w)\s*,\s*(\w)\s*,\s*(\w)\s*\)$")


def parse_spec(text):
    text = text.strip()
    m = _CR_RE.match(text)
    if m:
        return CrossRatioSpec(*m.groups())
    m = _TR_RE.match(text)
    if m:
        g = m.groups()
        return TripleRatioSpec(tuple(g[:3]), tuple(g[3:]))
    raise ValueError(f"not an invariant spec: {text!r}")


# ---------------------------------------------------------------- configurations

def _pair(x, y):
    return frozenset((x, y))


class Config:
    """Labelled points plus the attached lines for coincident pairs."""

    def __init__(self, points, lines=None):
        self.points = {k: (v if isinstance(v, ProjPoint) else ProjPoint(*v)) for k, v in points.items()}
        self.lines = {}
        for key, ln in (lines or {}).items():
            key = _pair(*key) if not isinstance(key, frozenset) else key
            self.lines[key] = ln if isinstance(ln, ProjLine) else ProjLine(*ln)

    def __getitem__(self, label):
        return self.points[label]

    def coincide(self, x, y):
        return not any(minors(self.points[x], self.points[y]))

    def line(self, x, y):
        """l_{x,y}: the join if the points differ, else the attached line."""
        explicit = self.lines.get(_pair(x, y))
        if not self.coincide(x, y):
            j = cross(self.points[x], self.points[y])
            if explicit is not None and any(minors(j, explicit)):
                log.warning("explicit line l_%s,%s disagrees with the join; using the explicit line", x, y)
                return tuple(explicit)
            return j
        if explicit is None:
            raise MissingLine(f"{x} and {y} coincide and no line l_{x},{y} is given")
        return tuple(explicit)

    def map(self, fn):
        pts = {k: p.map(fn) for k, p in self.points.items()}
        lns = {k: ln.map(fn) for k, ln in self.lines.items()}
        return Config(pts, lns)


def _nonzero_index(v):
    # prefer a coordinate that is a nonzero constant; fall back to any nonzero one
    for k, c in enumerate(v):
        if c and (not hasattr(c, "is_ground") or c.is_ground):
            return k
    for k, c in enumerate(v):
        if c:
            return k
    raise ValueError("zero vector")


def _pencil_factor(cfg, e, x, y):
    """(num, den) with (l_EX x l_EY) = (num/den) * E."""
    E = cfg[e]
    xe, ye = cfg.coincide(x, e), cfg.coincide(y, e)
    if not xe and not ye:
        return det3(cfg[x], cfg[y], E), 1
    if xe and not ye:
        return dot(cfg.line(x, e), cfg[y]), 1
    if ye and not xe:
        return -dot(cfg.line(y, e), cfg[x]), 1
    k = _nonzero_index(E)
    return cross(cfg.line(x, e), cfg.line(y, e))[k], E[k]


def cross_ratio_pencil_raw(spec, cfg):
    a, b, c, d, e = spec.labels
    ac = _pencil_factor(cfg, e, a, c)
    bd = _pencil_factor(cfg, e, b, d)
    bc = _pencil_factor(cfg, e, b, c)
    ad = _pencil_factor(cfg, e, a, d)
    num = ac[0] * bd[0] * bc[1] * ad[1]
    den = bc[0] * ad[0] * ac[1] * bd[1]
    return num, den


def cross_ratio_pencil(spec, cfg):
    return ExtScalar(*cross_ratio_pencil_raw(spec, cfg))


def cross_ratio_collinear(a, b, c, d):
    """Cross-ratio of four points on one line, from 2x2 brackets."""
    pts = [tuple(p) for p in (a, b, c, d)]
    # the carrier line: join of any two distinct points
    line = None
    for i in range(4):
        for j in range(i + 1, 4):
            m = minors(pts[i], pts[j])
            if any(m):
                line = m
                break
        if line:
            break
    if line is None:
        return ExtScalar.undefined()
    for p in pts:
        if dot(line, p):
            raise NotCollinear("points are not on one line")
    # drop a coordinate k whose basis point is off the line
    k = next(i for i in range(3) if line[i])
    i, j = [t for t in range(3) if t != k]

    def br(p, q):
        return p[i] * q[j] - p[j] * q[i]

    A, B, C, D = pts
    return ExtScalar(br(A, C) * br(B, D), br(B, C) * br(A, D))


def triple_ratio_cevian_raw(spec, cfg):
    a, b, c = spec.triangle
    p, q, r = spec.targets
    if not det3(cfg[a], cfg[b], cfg[c]):
        raise DegenerateTriangle(f"{a}, {b}, {c} are collinear")
    ap = cfg.line(a, p)
    bq = cfg.line(b, q)
    cr_ = cfg.line(c, r)
    num = dot(cr_, cfg[a]) * dot(ap, cfg[b]) * dot(bq, cfg[c])
    den = dot(cr_, cfg[b]) * dot(ap, cfg[c]) * dot(bq, cfg[a])
    return -num, den


def triple_ratio_cevian(spec, cfg):
    return ExtScalar(*triple_ratio_cevian_raw(spec, cfg))


def triple_ratio_menelaus(spec, transversal, cfg):
    """-[A,B;R',Z] [B,C;P',X] [C,A;Q',Y] with X, Y, Z on the transversal."""
    a, b, c = spec.triangle
    p, q, r = spec.targets
    A, B, C = cfg[a], cfg[b], cfg[c]
    if not det3(A, B, C):
        raise DegenerateTriangle(f"{a}, {b}, {c} are collinear")
    T = tuple(transversal)
    for V in (A, B, C):
        if not dot(T, V):
            raise BadTransversal("transversal passes through a vertex")
    AB, BC, CA = join(A, B), join(B, C), join(C, A)
    Z, X, Y = meet(T, AB), meet(T, BC), meet(T, CA)
    Rp = meet(ProjLine(*cfg.line(c, r)), AB)
    Pp = meet(ProjLine(*cfg.line(a, p)), BC)
    Qp = meet(ProjLine(*cfg.line(b, q)), CA)
    prod = ext_mul(
        ext_mul(cross_ratio_collinear(A, B, Rp, Z), cross_ratio_collinear(B, C, Pp, X)),
        cross_ratio_collinear(C, A, Qp, Y),
    )
    return ExtScalar(-prod.num, prod.den)


def _affine(points):
    """Pick a line at infinity missing every point and dehomogenize."""
    for w in ((0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1), (1, 2, 3), (3, -1, 2), (2, 5, -7)):
        if all(dot(w, p) for p in points):
            return [tuple(Fraction(x) / dot(w, p) for x in p) for p in points]
    raise ValueError("could not find an affine chart")


def ceva_ratio(cfg, triangle=("A", "B", "C"), feet=("D", "E", "F")):
    """(AF.BD.CE)/(FB.DC.EA) in oriented lengths; D on BC, E on CA, F on AB."""
    a, b, c = triangle
    d, e, f = feet
    A, B, C, D, E, F = (tuple(cfg[x]) for x in (a, b, c, d, e, f))
    if not det3(A, B, C):
        raise DegenerateTriangle("triangle is degenerate")
    for foot, (u, v) in ((D, (B, C)), (E, (C, A)), (F, (A, B))):
        if det3(foot, u, v):
            raise PointOffSide("foot is not on its side")
    A, B, C, D, E, F = _affine([A, B, C, D, E, F])

    def seg(p, q, u, v):
        k = next(i for i in range(3) if v[i] != u[i])
        return q[k] - p[k]

    num = seg(A, F, A, B) * seg(B, D, B, C) * seg(C, E, C, A)
    den = seg(F, B, A, B) * seg(D, C, B, C) * seg(E, A, C, A)
    return ExtScalar(num, den)


# ---------------------------------------------------------------- dispatch

def evaluate_raw(spec, cfg):
    if isinstance(spec, CrossRatioSpec):
        return cross_ratio_pencil_raw(spec, cfg)
    return triple_ratio_cevian_raw(spec, cfg)


def evaluate(spec, cfg):
    """ExtScalar value of a spec on a concrete configuration."""
    return ExtScalar(*evaluate_raw(spec, cfg))


# ---------------------------------------------------------------- identities

def _fraction_product(factors):
    if any(f.is_undefined for f in factors):
        return Cmp.INCOMPARABLE
    num = 1
    den = 1
    for f in factors:
        num *= f.num
        den *= f.den
    return Cmp.EQUAL if num == den else Cmp.UNEQUAL


def identity_1_factors(cfg, a="A", b="B", c="C", d="D", e="E"):
    return [
        cross_ratio_pencil(CrossRatioSpec(a, b, c, d, e), cfg),
        cross_ratio_pencil(CrossRatioSpec(a, b, d, e, c), cfg),
        cross_ratio_pencil(CrossRatioSpec(a, b, e, c, d), cfg),
    ]


def identity_2_factors(cfg, a="A", b="B", c="C", d="D", e="E", f="F"):
    return [
        cross_ratio_pencil(CrossRatioSpec(a, b, c, d, f), cfg),
        cross_ratio_pencil(CrossRatioSpec(a, b, d, e, f), cfg),
        cross_ratio_pencil(CrossRatioSpec(a, b, e, c, f), cfg),
    ]


def check_identity_1(cfg, labels="ABCDE"):
    """[A,B;C,D]_E [A,B;D,E]_C [A,B;E,C]_D = 1, compared as fractions."""
    return _fraction_product(identity_1_factors(cfg, *labels))


def check_identity_2(cfg, labels="ABCDEF"):
    """[A,B;C,D]_F [A,B;D,E]_F [A,B;E,C]_F = 1, compared as fractions."""
    return _fraction_product(identity_2_factors(cfg, *labels))


def same_value(x, y):
    return ext_eq(x, y) is Cmp.EQUAL
