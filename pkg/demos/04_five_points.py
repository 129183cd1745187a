"""Five points: charts that overlap, and a check that they agree.

Each Y5 file describes the same degeneration from two or three frames.
Sampling the free coordinates of one chart and solving the relations for the
others, every relation not used in the solve must then hold exactly.
"""

from chowsmooth.charts import bundled_case
from chowsmooth.cotangent import verify_case
from chowsmooth.sampler import SampleConfig, cross_chart_agreement

cfg = SampleConfig(seed=0, trials=100)
for name in ("Y5.generic", "Y5.simple", "Y5.deep"):
    case = bundled_case(name)
    r = cross_chart_agreement(case, cfg)
    ok, rep = verify_case(case)
    print(f"{name}: corank {rep.corank} (two-dimensional moduli), agreement {r['accepted']}/{r['trials']}")
    for rel in r["relations"]:
        print(f"    {rel['role']:<12} {rel['relation']}")
