"""Why each summand of the orbit class enters with coefficient 1.

Eight linear conditions on a 3x3 matrix: a point-to-point condition costs two,
a point-to-line condition one.  For generic data the solutions form a line,
and the coefficient is 1 when that line is spanned by an invertible matrix.
"""

import random

from chowsmooth.homology import (
    all_patterns,
    as_matrix,
    build_system,
    coefficient,
    kernel,
    random_problem,
    run_trials,
    singular_problem,
)

rng = random.Random(7)
pattern = all_patterns()[1]
prob = random_problem(pattern, rng, bound=9)
rows = build_system(prob)
(vec,) = kernel(rows)
print(f"pattern {pattern.name}: {len(rows)} equations, kernel spanned by")
for r in as_matrix(vec):
    print("   ", [str(x) for x in r])
print("coefficient:", coefficient(prob))

prob, M0 = singular_problem(rng, bound=9)
print("\nconditions chosen to pass through a rank-2 matrix give coefficient", coefficient(prob))

print("\n100 random instances per pattern:")
for p in all_patterns():
    r = run_trials(p, trials=100, seed=0)
    print(f"  {r['pattern']}: {r['coefficients']}, rejected {r['rejected']}")
