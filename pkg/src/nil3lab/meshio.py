"""ASCII mesh (OBJ/PLY) and CSV export.

Meshes are written in matrix coordinates so external viewers show the true
embedding; a file header comment says so.  Exports are byte-stable given
identical inputs, and CSV uses 17 significant digits so re-parsing
reproduces the values exactly at the printed precision.
"""

from __future__ import annotations

import numpy as np

from .radial import RadialProfile

__all__ = [
    "MeshValidationError",
    "surface_mesh",
    "check_mesh",
    "export_mesh",
    "export_csv",
    "read_csv",
]


class MeshValidationError(ValueError):
    pass


def surface_mesh(sample) -> tuple[np.ndarray, np.ndarray]:
    """Triangulate a SurfaceSample over its parameter grid, in matrix coordinates.

    A periodic v-direction is closed by identifying the seam vertices, so the
    vertex count is n_u * n_v instead of n_u * (n_v + 1).
    """
    ugrid = np.asarray(sample.u_grid, dtype=float)
    vgrid = np.asarray(sample.v_grid, dtype=float)
    n_u, n_v = len(ugrid), len(vgrid)
    verts = np.empty((n_u * n_v, 3))
    for i, uu in enumerate(ugrid):
        for j, vv in enumerate(vgrid):
            x, y, zeta = sample.chart_map(uu, vv)
            verts[i * n_v + j] = (x, y, x * y / 2.0 + zeta)

    faces = []
    v_pairs = n_v if sample.periodic_v else n_v - 1
    for i in range(n_u - 1):
        for j in range(v_pairs):
            jn = (j + 1) % n_v
            v00 = i * n_v + j
            v10 = (i + 1) * n_v + j
            v11 = (i + 1) * n_v + jn
            v01 = i * n_v + jn
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    return verts, np.asarray(faces, dtype=int)


def check_mesh(vertices: np.ndarray, faces: np.ndarray) -> None:
    """Raise unless indices are in range and shared edges are consistently oriented."""
    vertices = np.asarray(vertices)
    faces = np.asarray(faces)
    if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
        raise MeshValidationError("face index out of range")
    edge_count: dict[tuple[int, int], int] = {}
    for tri in faces:
        a, b, c = (int(v) for v in tri)
        if a == b or b == c or a == c:
            raise MeshValidationError(f"degenerate face {tri}")
        for e in ((a, b), (b, c), (c, a)):
            edge_count[e] = edge_count.get(e, 0) + 1
    for (a, b), n in edge_count.items():
        if n > 1:
            raise MeshValidationError(f"edge ({a},{b}) traversed twice in the same direction")
        if edge_count.get((b, a), 0) > 1:
            raise MeshValidationError(f"edge ({b},{a}) traversed twice")


def export_mesh(sample, path, fmt: str = "obj", scalar=None) -> None:
    """Write the triangulated sample as ASCII OBJ or PLY.

    scalar, if given, must be one value per vertex (flattened parameter grid
    order); it lands in a PLY "quality" property or, for OBJ, in the common
    vertex-color extension slots.
    """
    verts, faces = surface_mesh(sample)
    check_mesh(verts, faces)
    if scalar is not None:
        scalar = np.asarray(scalar, dtype=float).ravel()
        if len(scalar) != len(verts):
            raise ValueError("per-vertex scalar length does not match the mesh")
    if fmt == "obj":
        lines = ["# nil3lab surface mesh, matrix coordinates (x, y, z entries)"]
        for k, v in enumerate(verts):
            if scalar is None:
                lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
            else:
                s = scalar[k]
                lines.append(
                    f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g} {s:.17g} {s:.17g} {s:.17g}"
                )
        for f in faces:
            lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    elif fmt == "ply":
        header = [
            "ply",
            "format ascii 1.0",
            "comment nil3lab surface mesh, matrix coordinates (x, y, z entries)",
            f"element vertex {len(verts)}",
            "property float x",
            "property float y",
            "property float z",
        ]
        if scalar is not None:
            header.append("property float quality")
        header += [f"element face {len(faces)}", "property list uchar int vertex_indices", "end_header"]
        lines = header
        for k, v in enumerate(verts):
            row = f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}"
            if scalar is not None:
                row += f" {scalar[k]:.17g}"
            lines.append(row)
        for f in faces:
            lines.append(f"3 {f[0]} {f[1]} {f[2]}")
    else:
        raise ValueError(f"unknown mesh format {fmt!r} (expected 'obj' or 'ply')")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def export_csv(data, path) -> None:
    """Write a RadialProfile (columns r, f, fprime) or a mapping of named columns."""
    if isinstance(data, RadialProfile):
        columns = {"r": data.r, "f": data.value, "fprime": data.deriv}
    else:
        columns = {k: np.asarray(v, dtype=float) for k, v in data.items()}
    names = list(columns)
    n = len(columns[names[0]])
    for name in names:
        if len(columns[name]) != n:
            raise ValueError("CSV columns must share a length")
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for k in range(n):
            fh.write(",".join(f"{columns[name][k]:.17g}" for name in names) + "\n")


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path) as fh:
        names = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: np.array([float(row[i]) for row in rows]) for i, name in enumerate(names)}
    return cols
