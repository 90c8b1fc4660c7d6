"""Walk through the pipeline for the tube v = y^2 + y^6 + y^9.

Prints the second-order equation, the lowest determining equations for a
cubic vector field ansatz, the resulting symmetry algebra and the
algebraic-dependence verdict for phi_yy over phi_y.
"""

from crsym.jobs import build_spec, parse_job
from crsym.lie import VectorFieldAnsatz, classify, compute_symmetries, determining_for
from crsym.obstruct import tube_obstruction_report
from crsym.segre import complexify, derive_pde_system

job = parse_job("kind = tube\nphi = y^2 + y^6 + y^9\norder = 14\n")
spec = build_spec(job, job.order)
sys = derive_pde_system(complexify(spec))
print("second-order equation (trusted through degree", sys.trusted_order, ")")
for line in sys.render():
    print("  ", line)

ansatz = VectorFieldAnsatz(1, 3)
ds = determining_for(sys, ansatz)
print(f"\ndetermining system: {len(ds)} equations in {len(ansatz)} unknowns; pure W1 powers:")
for line in ds.render():
    if "z1" not in line.split(":")[0] and " w" not in line.split(":")[0]:
        print("  ", line)

alg = compute_symmetries(sys, 3)
print("\nsymmetry algebra, dim", alg.dim, ":", ", ".join(alg.render()))
print("classification:", classify(alg, spec))

deep = build_spec(job, 50)
rep = tube_obstruction_report(deep, 4, 24)
print("\nphi_yy over phi_y:", rep["pairs"][0]["verdict"], rep["pairs"][0].get("bounds"))
