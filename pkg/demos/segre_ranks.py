"""Segre chain ranks for the Heisenberg quadric and the Levi-flat hyperplane.

For each chain length k the table shows the Jacobian rank at the origin, the
sampled generic rank, and the rank at points the chain maps back to 0.
"""

from crsym.jobs import build_spec, parse_job
from crsym.obstruct import minimality
from crsym.segre import complexify

for label, phi in (("Heisenberg v = y^2", "y^2"), ("Levi-flat v = 0", "0")):
    job = parse_job(f"kind = tube\nphi = {phi}\norder = 10\n")
    rep = minimality(complexify(build_spec(job, 10)), k_max=6, order=8)
    print(label)
    print("   k  at 0  generic  over 0")
    for r in rep["ranks"]:
        print(f"  {r['k']:2d}  {r['rank_at_0']:4d}  {r['generic_rank']:7d}  {str(r['rank_over_origin']):>6}")
    print("  minimal:", rep["minimal"], " nu0:", rep["nu0"], " mu0:", rep["mu0"])
    print()
