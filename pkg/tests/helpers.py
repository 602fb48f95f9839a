"""Shared helpers: random coordinate changes and curve distances."""
from __future__ import annotations

import random

import numpy as np

from reticular.jet_algebra import CornerPoly, monomials_up_to, substitute


def random_poly(ring: CornerPoly, rng: random.Random, lo: int, hi: int, span: int = 2, density: float = 0.5):
    terms = {}
    for m in monomials_up_to(ring.nvars, hi, lo):
        if rng.random() < density:
            c = rng.randint(-span, span)
            if c:
                terms[m] = c
    return ring.like(terms)


def random_change(f: CornerPoly, rng: random.Random, degree: int = 4):
    """Bindings for a random element of the corner-preserving group, degree <= ``degree``.

    Corner variables go to ``x_i * (c_i + h.o.t.)`` with ``c_i > 0``; the
    internal variables get an invertible linear part plus higher terms.
    """
    r, k = f.r, f.k
    zero = f.const(0)
    bind = {}
    for i in range(r):
        x = zero.var(f"x{i + 1}")
        unit = zero.const(rng.randint(1, 3)) + random_poly(zero, rng, 1, degree - 1, 1, 0.4)
        bind[f"x{i + 1}"] = x * unit
    while True:
        A = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)]
        if k == 0 or round(np.linalg.det(np.array(A, dtype=float))) != 0:
            break
    for j in range(k):
        lin = zero
        for c in range(k):
            if A[j][c]:
                lin = lin + zero.var(f"y{c + 1}") * A[j][c]
        if r:
            lin = lin + zero.var("x1") * rng.randint(-1, 1)
        bind[f"y{j + 1}"] = lin + random_poly(zero, rng, 2, degree, 1, 0.3)
    return bind


def compose(f: CornerPoly, bind: dict, l: int = 10) -> CornerPoly:
    return substitute(f, bind, l)


def hausdorff_to_curve(points: np.ndarray, curve: np.ndarray):
    """(max distance mesh -> curve, max distance curve -> mesh)."""
    from scipy.spatial import cKDTree

    if not len(points):
        return np.inf, np.inf
    a = cKDTree(curve).query(points)[0].max()
    b = cKDTree(points).query(curve)[0].max()
    return float(a), float(b)
