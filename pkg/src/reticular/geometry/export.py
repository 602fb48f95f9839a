"""Writers for discriminant meshes: CSV, Wavefront OBJ and ASCII PLY point clouds."""
from __future__ import annotations

import csv
from pathlib import Path

__all__ = ["export_mesh", "FORMATS"]

FORMATS = ("csv", "obj", "ply")


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _xyz(coords) -> list:
    c = [float(v) for v in coords][:3]
    return c + [0.0] * (3 - len(c))


def export_mesh(mesh, fmt: str, path) -> Path:
    """Write ``mesh`` to ``path``; rows are sorted so output is reproducible."""
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose one of {', '.join(FORMATS)}")
    path = Path(path)
    rows = mesh.sorted_rows()
    if fmt == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(mesh.ambient_names) + ["stratum"])
            for coords, label in rows:
                w.writerow([_fmt(v) for v in coords] + [label])
        return path
    if not rows:
        raise ValueError(f"cannot write an empty mesh as {fmt.upper()}")
    labels = sorted({label for _, label in rows})
    if fmt == "obj":
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"# point cloud; coordinates {' '.join(mesh.ambient_names)}\n")
            for label in labels:
                fh.write(f"g {label}\n")
                for coords, lab in rows:
                    if lab == label:
                        fh.write("v " + " ".join(_fmt(v) for v in _xyz(coords)) + "\n")
        return path
    with path.open("w", encoding="utf-8") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"comment coordinates {' '.join(mesh.ambient_names)}\n")
        for i, label in enumerate(labels):
            fh.write(f"comment stratum {i} {label}\n")
        fh.write(f"element vertex {len(rows)}\n")
        fh.write("property double x\nproperty double y\nproperty double z\nproperty int stratum\n")
        fh.write("end_header\n")
        ids = {label: i for i, label in enumerate(labels)}
        for coords, label in rows:
            fh.write(" ".join(_fmt(v) for v in _xyz(coords)) + f" {ids[label]}\n")
    return path
