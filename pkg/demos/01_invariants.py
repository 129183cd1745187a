"""Cross-ratios and triple ratios on one concrete configuration.

Walks through the three ways the package computes a cross-ratio, then the
two routes to a triple ratio, on exact rational points.
"""

import random
from fractions import Fraction

from chowsmooth.geometry import ProjLine, ProjPoint, join, meet
from chowsmooth.invariants import (
    Config,
    CrossRatioSpec,
    TripleRatioSpec,
    check_identity_1,
    cross_ratio_collinear,
    cross_ratio_pencil,
    triple_ratio_cevian,
    triple_ratio_menelaus,
)
from chowsmooth.sampler import coordinate_example



def fmt(v):
    return "(" + " : ".join(str(x) for x in v) + ")"


cfg = Config({
    "A": (1, 0, 0), "B": (0, 1, 0), "C": (0, 0, 1),
    "D": (1, 1, 1), "E": (2, -1, 3), "F": (5, 2, -4),
})

spec = CrossRatioSpec("A", "B", "C", "D", "E")
pencil = cross_ratio_pencil(spec, cfg)
print(f"{spec} from 3x3 determinants: {pencil}")

# cut the four lines through E with a transversal and read the ratio on it
T = ProjLine(1, 2, 7)
E = ProjPoint(*cfg["E"])
feet = [meet(join(E, ProjPoint(*cfg[x])), T) for x in "ABCD"]
print(f"same value from feet on the line {fmt(T)}: {cross_ratio_collinear(*feet)}")

print("symbolic pencil value on the standard frame:", coordinate_example()["value"])
print("five-point product identity:", check_identity_1(cfg).value)

tr = TripleRatioSpec(("A", "B", "C"), ("D", "E", "F"))
print(f"\n{tr}, cevian route:   {triple_ratio_cevian(tr, cfg)}")
print(f"{tr}, Menelaus route: {triple_ratio_menelaus(tr, (3, 1, -2), cfg)}")

# concurrent cevians: the triple ratio collapses to 1
rng = random.Random(1)
P = ProjPoint(*(Fraction(rng.randint(1, 9)) for _ in range(3)))
A, B, C = (ProjPoint(*cfg[x]) for x in "ABC")
ceva = Config({
    "A": A, "B": B, "C": C,
    "D": meet(join(A, P), join(B, C)),
    "E": meet(join(B, P), join(C, A)),
    "F": meet(join(C, P), join(A, B)),
})
print(f"cevians through {fmt(P)}: triple ratio {triple_ratio_cevian(tr, ceva)}")
