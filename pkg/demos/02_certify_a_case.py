"""Certify one degeneration end to end, then break it on purpose.

The A.1 atlas has three charts with twelve local coordinates.  Relations
between charts are cleared of denominators, the base point is solved for the
parameters they pin down, and the linear parts give a matrix whose corank is
the dimension of the cotangent space.
"""

from chowsmooth.charts import bundled_case, check_facts
from chowsmooth.cotangent import ablate, build_relations, declared_labels, verify_case
from chowsmooth.poly import format_poly

case = bundled_case("A.1")
print(f"case {case.case_name}: charts {sorted(case.charts)}, coordinates {case.variable_names}")

for f in check_facts(case):
    print(f"  fact chart {f['chart']} {f['spec']}: {f['computed']}")

m = build_relations(case)
print("\nbase point:")
for label, text in m.base.constraints:
    print(f"  {label}: {text}")
print("free parameters:", m.parameter_vars)
print("\nlinear parts (nonzero entries only):")
for label, row in zip(m.row_labels, m.rows):
    terms = [f"({format_poly(x)}) d{c}" for c, x in zip(m.columns, row) if x]
    if terms:
        print(f"  {label}: " + " + ".join(terms))

ok, rep = verify_case(case)
d = rep.to_dict()
print(f"\nrank {d['rank']} of {d['n_differentials']}, corank {d['corank']}, span {d['spanning']}")
print("pivots certified nonzero at 3 samples; sampled ranks", d["sampled_ranks"])

print("\nremoving one declared relation line at a time:")
for k, label in enumerate(declared_labels(case)):
    ok, rep = verify_case(case, relations=ablate(case, k))
    print(f"  without {label}: corank {rep.corank}, {'pass' if ok else 'fail'}")
