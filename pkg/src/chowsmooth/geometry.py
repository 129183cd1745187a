"""Points and lines of the projective plane over a commutative ring.

Coordinates are Fractions for concrete configurations, or sympy
``PolyElement`` for chart coordinates.  Nothing here divides, so the same
code serves both; "is zero" means identically zero for polynomials.
"""

from fractions import Fraction
from itertools import combinations

from .scalars import as_rational


class EqualPoints(ValueError):
    pass


class EqualLines(ValueError):
    pass


class DegenerateFrame(ValueError):
    pass


def _coerce(c):
    if isinstance(c, (int, str)):
        return as_rational(c)
    return c


class _Triple:
    __slots__ = ("coords",)

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)) and not hasattr(coords[0], "ring"):
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("need three homogeneous coordinates")
        coords = tuple(_coerce(c) for c in coords)
        if all(not c for c in coords):
            raise ValueError("all coordinates vanish")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("immutable")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def same_as(self, other):
        """Projective equality: all 2x2 minors vanish."""
        return not any(minors(self.coords, other.coords))

    def map(self, fn):
        return type(self)(*(fn(c) for c in self.coords))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.same_as(other)

    def __hash__(self):
        # only meaningful for structural use; projective classes need same_as
        return hash(type(self).__name__)

    def __repr__(self):
        inner = " : ".join(str(c) for c in self.coords)
        return f"({inner})"


class ProjPoint(_Triple):
    __slots__ = ()


class ProjLine(_Triple):
    __slots__ = ()


def minors(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def cross(u, v):
    return minors(u, v)


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det3(p, q, r):
    """Determinant of the matrix with columns p, q, r."""
    return dot(p, cross(q, r))


def incident(point, line):
    return not dot(point, line)


def join(p, q):
    c = cross(p, q)
    if all(not x for x in c):
        raise EqualPoints(f"{p!r} and {q!r} coincide")
    return ProjLine(*c)


def meet(l1, l2):
    c = cross(l1, l2)
    if all(not x for x in c):
        raise EqualLines(f"{l1!r} and {l2!r} coincide")
    return ProjPoint(*c)


def collinear(p, q, r):
    return not det3(p, q, r)


def _inverse3(m):
    """Inverse of a 3x3 Fraction matrix (adjugate over determinant)."""
    cols = [tuple(m[i][j] for i in range(3)) for j in range(3)]
    d = det3(*cols)
    if d == 0:
        raise DegenerateFrame("singular matrix")
    adj = [cross(cols[1], cols[2]), cross(cols[2], cols[0]), cross(cols[0], cols[1])]
    return [[adj[i][j] / d for j in range(3)] for i in range(3)]


def apply(matrix, point):
    cls = type(point) if isinstance(point, _Triple) else ProjPoint
    return cls(*(sum(matrix[i][j] * point[j] for j in range(3)) for i in range(3)))


def apply_to_line(matrix, line):
    """Image of a line under the point map ``matrix`` (inverse-transpose action)."""
    inv = _inverse3(matrix)
    return ProjLine(*(sum(inv[j][i] * line[j] for j in range(3)) for i in range(3)))


def normalize_frame(a, b, c, d):
    """Matrix sending a, b, c, d to (1:0:0), (0:1:0), (0:0:1), (1:1:1)."""
    pts = [tuple(as_rational(x) for x in p) for p in (a, b, c, d)]
    for trio in combinations(range(4), 3):
        if det3(*(pts[i] for i in trio)) == 0:
            raise DegenerateFrame(f"points {trio} are collinear")
    # columns a, b, c scaled so that their sum is d
    base = [[pts[j][i] for j in range(3)] for i in range(3)]
    inv = _inverse3(base)
    lam = [sum(inv[i][k] * pts[3][k] for k in range(3)) for i in range(3)]
    scaled = [[base[i][j] * lam[j] for j in range(3)] for i in range(3)]
    return _inverse3(scaled)


def generic_position(points, labels=None):
    """All coincident pairs and collinear triples among ``points``."""
    points = list(points)
    if labels is None:
        labels = list(range(len(points)))
    coincident = []
    for i, j in combinations(range(len(points)), 2):
        if not any(minors(points[i], points[j])):
            coincident.append((labels[i], labels[j]))
    triples = []
    for i, j, k in combinations(range(len(points)), 3):
        if not det3(points[i], points[j], points[k]):
            triples.append((labels[i], labels[j], labels[k]))
    return {"coincident": coincident, "collinear": triples}


def in_general_position(points):
    rep = generic_position(points)
    return not rep["coincident"] and not rep["collinear"]
