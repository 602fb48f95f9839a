"""Point clouds for the F4+ caustic and the C3+ wavefront.

    python3 demos/figure_meshes.py [output-dir]

Writes OBJ and CSV files that any point-cloud viewer can open, with one
group per stratum (C_empty: smooth part, C_1: on the boundary x = 0,
Q_empty_1: where the critical set meets the boundary).
"""
import sys
from collections import Counter
from pathlib import Path

from reticular import catalog
from reticular.geometry import caustic, export_mesh, wavefront

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

f4 = catalog.get("F4+")
mesh = caustic(f4.family, [(-1.0, 1.0)] * 3, res=80)
print(f"F4+ family {f4.family.F}")
print("  caustic strata:", dict(Counter(mesh.strata)))
export_mesh(mesh, "obj", out / "f4_caustic.obj")
export_mesh(mesh, "csv", out / "f4_caustic.csv")

c3 = catalog.get("C3+", "Legendrian")
front = wavefront(c3.family, [(-1.0, 1.0)] * 3, res=80)
print(f"C3+ family {c3.family.F}")
print("  wavefront strata:", dict(Counter(front.strata)))
export_mesh(front, "ply", out / "c3_wavefront.ply")

print(f"files written to {out.resolve()}")
