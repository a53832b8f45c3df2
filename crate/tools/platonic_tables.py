"""Regenerate the Platonic solid edge and face tables from coordinates.

Edges join vertices at minimal distance; faces are the vertex sets lying on a
supporting plane. Writes data/graphs/<solid>_{edges,faces}.json.
"""
import itertools
import json
import pathlib

import numpy as np

PHI = (1 + 5 ** 0.5) / 2


def solids():
    tetra = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    cube = list(itertools.product([-1, 1], repeat=3))
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    ico = []
    for a in (-1, 1):
        for b in (-PHI, PHI):
            ico += [(0, a, b), (a, b, 0), (b, 0, a)]
    dod = list(itertools.product([-1, 1], repeat=3))
    for a in (-1, 1):
        for b in (-1, 1):
            dod += [(0, a / PHI, b * PHI), (a / PHI, b * PHI, 0), (b * PHI, 0, a / PHI)]
    return {
        "tetrahedron": tetra,
        "octahedron": octa,
        "cube": cube,
        "icosahedron": ico,
        "dodecahedron": dod,
    }


def tables(points):
    p = np.array(points, float)
    n = len(p)
    dist = np.linalg.norm(p[:, None] - p[None], axis=2)
    shortest = min(dist[i, j] for i in range(n) for j in range(n) if i != j)
    edges = [[i, j] for i in range(n) for j in range(i + 1, n) if abs(dist[i, j] - shortest) < 1e-9]
    faces = set()
    for a, b, c in itertools.combinations(range(n), 3):
        normal = np.cross(p[b] - p[a], p[c] - p[a])
        if np.linalg.norm(normal) < 1e-9:
            continue
        side = (p - p[a]) @ normal
        if (side <= 1e-9).all() or (side >= -1e-9).all():
            faces.add(tuple(sorted(np.where(abs(side) < 1e-9)[0].tolist())))
    return n, edges, [list(f) for f in sorted(faces)]


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "graphs"
    out.mkdir(parents=True, exist_ok=True)
    for name, points in solids().items():
        n, edges, faces = tables(points)
        for kind, e in (("edges", edges), ("faces", faces)):
            (out / f"{name}_{kind}.json").write_text(json.dumps({"n": n, "edges": e}) + "\n")
        print(name, n, len(edges), len(faces))


if __name__ == "__main__":
    main()
