"""Caustics and wavefronts of generating families as labeled point clouds.

Each corner stratum ``sigma`` (the corner coordinates forced to zero) gives
a system of polynomial equations in the unknowns ``v`` (free corner and
internal variables) and the base coordinates.  Near the origin its
solution set is a graph over a few of the unknowns; those are chosen by
exact rank selection, sampled on a grid, and the remaining unknowns are
recovered by damped Newton.  Degenerate critical points are bracketed by
sign changes of the exact Hessian determinant and polished with a
least-norm Newton iteration.  One-dimensional pieces are subdivided until
neighbouring image points are closer than ``refine_spacing``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, fields

import numpy as np

from ..jet_algebra import CornerPoly, derivative, substitute
from ..linalg import matrix_rank
from ..unfoldings import LAGRANGIAN, LEGENDRIAN, GeneratingFamily

__all__ = ["SolverConfig", "DiscriminantMesh", "caustic", "wavefront", "stratum_label", "load_config"]


@dataclass
class SolverConfig:
    tol_eq: float = 1e-9
    seed_box: tuple = (-2.0, 2.0)
    newton_max_iter: int = 50
    damping: float = 0.5
    refine_spacing: float = 5e-4
    max_refine_depth: int = 16
    slab_points: int = 200_000

    @classmethod
    def from_mapping(cls, data: dict) -> "SolverConfig":
        cfg = cls()
        known = {f.name: f for f in fields(cls)}
        for key, raw in data.items():
            key = key.strip().replace("-", "_")
            if key not in known:
                raise ValueError(f"unknown solver setting {key!r}")
            cur = getattr(cfg, key)
            if isinstance(cur, tuple):
                lo, hi = (float(v) for v in str(raw).replace(":", ",").split(","))
                val = (lo, hi)
            else:
                val = type(cur)(raw)
            setattr(cfg, key, val)
        return cfg


def load_config(path) -> SolverConfig:
    """Read ``key = value`` lines (``#`` starts a comment) into a :class:`SolverConfig`."""
    data = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            data[k.strip()] = v.strip()
    return SolverConfig.from_mapping(data)


def stratum_label(sigma) -> str:
    return "".join(str(i + 1) for i in sorted(sigma)) or "empty"


@dataclass
class DiscriminantMesh:
    ambient_names: tuple
    points: np.ndarray
    strata: list
    witnesses: np.ndarray
    witness_names: tuple
    meta: dict = field(default_factory=dict)

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient_names)

    def __len__(self):
        return len(self.strata)

    @property
    def labels(self) -> list:
        return sorted(set(self.strata))

    def stratum(self, label: str) -> np.ndarray:
        mask = np.array([s == label for s in self.strata], dtype=bool)
        return self.points[mask] if len(self.strata) else self.points

    def sorted_rows(self) -> list:
        rows = [(tuple(float(v) for v in p), s) for p, s in zip(self.points, self.strata)]
        rows.sort()
        return rows


# -- numeric polynomial evaluation ----------------------------------------------
class _NumPoly:
    def __init__(self, p: CornerPoly, names: tuple):
        idx = [p.names.index(n) for n in names]
        other = [i for i in range(p.nvars) if i not in idx]
        exps, coefs = [], []
        for e, c in p.terms.items():
            if any(e[i] for i in other):
                raise ValueError("polynomial involves a variable outside the unknowns")
            exps.append([e[i] for i in idx])
            coefs.append(float(c))
        self.E = np.array(exps, dtype=int).reshape(len(exps), len(names))
        self.c = np.array(coefs, dtype=float)
        self.maxe = self.E.max(axis=0) if len(exps) else np.zeros(len(names), dtype=int)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        N = X.shape[0]
        if not len(self.c):
            return np.zeros(N)
        out = np.zeros(N)
        powers = [[np.ones(N)] for _ in range(X.shape[1])]
        for j in range(X.shape[1]):
            for _ in range(int(self.maxe[j])):
                powers[j].append(powers[j][-1] * X[:, j])
        for e, c in zip(self.E, self.c):
            t = np.full(N, c)
            for j, ej in enumerate(e):
                if ej:
                    t = t * powers[j][ej]
            out += t
        return out


class _System:
    """Polynomial equations with compiled values and Jacobians."""

    def __init__(self, eqs: list, unknowns: tuple):
        self.unknowns = unknowns
        self.exact = eqs
        self.f = [_NumPoly(e, unknowns) for e in eqs]
        self.J = [[_NumPoly(derivative(e, u), unknowns) for u in unknowns] for e in eqs]

    def value(self, X):
        return np.stack([f(X) for f in self.f], axis=1) if self.f else np.zeros((len(X), 0))

    def jac(self, X):
        m, u = len(self.f), len(self.unknowns)
        out = np.empty((len(X), m, u))
        for i in range(m):
            for j in range(u):
                out[:, i, j] = self.J[i][j](X)
        return out

    def jac0(self):
        zero = {n: 0 for n in self.exact[0].names} if self.exact else {}
        return [[derivative(e, u).evaluate(zero) for u in self.unknowns] for e in self.exact]


def _newton_dependent(sys: _System, X: np.ndarray, dep: list, cfg: SolverConfig):
    """Solve for the ``dep`` columns of X (in place); returns a convergence mask."""
    X = X.copy()
    F = sys.value(X)
    norm = np.linalg.norm(F, axis=1)
    ok = np.isfinite(norm)
    for _ in range(cfg.newton_max_iter):
        active = ok & (norm > cfg.tol_eq * 1e-3)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        J = sys.jac(X[idx])[:, :, dep]
        try:
            step = np.linalg.solve(J, F[idx][..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.stack([np.linalg.lstsq(j, f, rcond=None)[0] for j, f in zip(J, F[idx])])
        lam = np.ones(len(idx))
        for _ in range(8):
            trial = X[idx].copy()
            trial[:, dep] -= lam[:, None] * step
            Ft = sys.value(trial)
            nt = np.linalg.norm(Ft, axis=1)
            worse = ~(nt < norm[idx]) & (lam > 1e-3)
            if not worse.any():
                break
            lam = np.where(worse, lam * cfg.damping, lam)
        X[idx] = trial
        F[idx] = Ft
        norm[idx] = nt
        ok &= np.isfinite(norm)
        ok &= np.all(np.abs(X) < 1e6, axis=1)
    return X, ok & (norm < cfg.tol_eq)


def _least_norm_polish(sys: _System, X: np.ndarray, cfg: SolverConfig, frozen: np.ndarray | None = None):
    """Minimal-norm Newton steps; ``frozen`` (bool, shape of X) pins coordinates."""
    X = X.copy()
    F = sys.value(X)
    norm = np.linalg.norm(F, axis=1)
    for _ in range(cfg.newton_max_iter):
        active = np.isfinite(norm) & (norm > cfg.tol_eq * 1e-3)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        J = sys.jac(X[idx])
        if frozen is not None:
            J = np.where(frozen[idx][:, None, :], 0.0, J)
        JJt = J @ np.transpose(J, (0, 2, 1))
        try:
            y = np.linalg.solve(JJt, F[idx][..., None])
        except np.linalg.LinAlgError:
            y = np.linalg.pinv(JJt) @ F[idx][..., None]
        step = (np.transpose(J, (0, 2, 1)) @ y)[..., 0]
        lam = np.ones(len(idx))
        for _ in range(8):
            trial = X[idx] - lam[:, None] * step
            nt = np.linalg.norm(sys.value(trial), axis=1)
            worse = ~(nt < norm[idx]) & (lam > 1e-3)
            if not worse.any():
                break
            lam = np.where(worse, lam * cfg.damping, lam)
        X[idx] = trial
        F[idx] = sys.value(trial)
        norm[idx] = np.linalg.norm(F[idx], axis=1)
    return X, np.isfinite(norm) & (norm < cfg.tol_eq)


def _choose_dependents(sys: _System, prefer: list) -> list:
    """Greedy exact column selection at the origin, in order of preference."""
    J0 = sys.jac0()
    m = len(J0)
    chosen = []
    rank = 0
    for j in prefer:
        trial = chosen + [j]
        rk = matrix_rank([[row[c] for c in trial] for row in J0]) if m else 0
        if rk > rank:
            chosen, rank = trial, rk
        if rank == m:
            break
    if rank < m:
        for j in prefer:
            if len(chosen) == m:
                break
            if j not in chosen:
                chosen.append(j)
    return chosen


# -- strata ---------------------------------------------------------------------
@dataclass
class _Stratum:
    label: str
    system: _System
    unknowns: tuple
    corner_free: list       # indices (in unknowns) of corner variables that must be >= 0
    det: object = None      # exact Hessian determinant for degenerate loci


def _hessian_det(F: CornerPoly, v: list) -> CornerPoly:
    H = [[derivative(derivative(F, a), b) for b in v] for a in v]
    return _det(H, F)


def _det(M, like):
    n = len(M)
    if n == 0:
        return like.const(1)
    if n == 1:
        return M[0][0]
    total = like.const(0)
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor, like)
        total = total + term if j % 2 == 0 else total - term
    return total


class _Extractor:
    def __init__(self, family: GeneratingFamily, region, res: int, cfg: SolverConfig | None):
        self.fam = family
        self.F = family.F
        self.cfg = cfg or SolverConfig()
        self.res = int(res)
        if self.res < 2:
            raise ValueError("resolution must be at least 2")
        self.base_names = family.unfolding_params + (("z",) if family.kind == LEGENDRIAN else ())
        region = list(region)
        if len(region) == 1 and len(self.base_names) > 1:
            region = region * len(self.base_names)
        if len(region) != len(self.base_names):
            raise ValueError(f"region needs {len(self.base_names)} intervals, got {len(region)}")
        for lo, hi in region:
            if not lo < hi:
                raise ValueError("each region interval needs lo < hi")
        self.region = {n: (float(lo), float(hi)) for n, (lo, hi) in zip(self.base_names, region)}
        self.dropped = 0
        self.r, self.k = family.r, family.k
        self.xs = list(self.F.names[:self.r])
        self.ys = list(self.F.names[self.r:self.r + self.k])

    # unknown ordering follows the ring; preference for dependents: base coords, then y, then x
    def _prefer(self, unknowns):
        base = [i for i, u in enumerate(unknowns) if u in self.base_names]
        ys = [i for i, u in enumerate(unknowns) if u in self.ys]
        xs = [i for i, u in enumerate(unknowns) if u in self.xs]
        return base + ys + xs

    def _restricted(self, zero_x):
        if not zero_x:
            return self.F
        return substitute(self.F, {x: self.F.const(0) for x in zero_x})

    def _axis(self, name):
        if name in self.region:
            lo, hi = self.region[name]
        else:
            lo, hi = self.cfg.seed_box
            if name in self.xs:
                lo = max(lo, 0.0)
        return np.linspace(lo, hi, self.res + 1)

    def _inside(self, X, unknowns):
        ok = np.ones(len(X), dtype=bool)
        tol = self.cfg.tol_eq
        for j, u in enumerate(unknowns):
            if u in self.region:
                lo, hi = self.region[u]
                ok &= (X[:, j] >= lo - tol) & (X[:, j] <= hi + tol)
            if u in self.xs:
                ok &= X[:, j] >= -tol
        return ok

    def _on_boundary(self, X, unknowns):
        mask = np.zeros(X.shape, dtype=bool)
        for j, u in enumerate(unknowns):
            if u in self.region:
                lo, hi = self.region[u]
                mask[:, j] = (X[:, j] == lo) | (X[:, j] == hi)
        return mask

    def _grid_sheet(self, st: _Stratum):
        """Grid over the free coordinates; returns (grid shape, X, ok, dep, free)."""
        sys = st.system
        unknowns = st.unknowns
        dep = _choose_dependents(sys, self._prefer(unknowns))
        free = [j for j in range(len(unknowns)) if j not in dep]
        if free:
            axes = [self._axis(unknowns[j]) for j in free]
            mesh = np.meshgrid(*axes, indexing="ij")
            shape = mesh[0].shape
            X = np.zeros((mesh[0].size, len(unknowns)))
            for a, j in enumerate(free):
                X[:, j] = mesh[a].ravel()
        else:
            # isolated solutions: seed from a small grid over every unknown
            axes = [np.linspace(*(self.region.get(u, self.cfg.seed_box)), 5) for u in unknowns]
            mesh = np.meshgrid(*axes, indexing="ij")
            shape = (mesh[0].size,)
            X = np.stack([m.ravel() for m in mesh], axis=1)
        X, ok = self._solve_in_slabs(sys, X, dep)
        self.dropped += int((~ok).sum())
        return shape, X, ok, dep, free

    def _solve_in_slabs(self, sys, X, dep):
        out = np.empty_like(X)
        oks = np.zeros(len(X), dtype=bool)
        step = self.cfg.slab_points
        for s in range(0, len(X), step):
            Xs, ok = _newton_dependent(sys, X[s:s + step], dep, self.cfg)
            out[s:s + step] = Xs
            oks[s:s + step] = ok
        return out, oks

    # -- sampling primitives ------------------------------------------------------
    def sample_sheet(self, st: _Stratum):
        shape, X, ok, dep, free = self._grid_sheet(st)
        edges = []
        if len(free) == 1:
            idx = np.arange(len(X) - 1)
            good = ok[:-1] & ok[1:]
            edges = np.stack([idx[good], idx[good] + 1], axis=1)
        if not free:
            # merge duplicates of isolated solutions
            pts = _dedupe(X[ok & self._inside(X, st.unknowns)])
            return pts, np.zeros((0, 2), dtype=int)
        return self._finish(st, st.system, X, ok, edges)

    def degenerate_locus(self, st: _Stratum):
        shape, X, ok, dep, free = self._grid_sheet(st)
        full = _System(list(st.system.exact) + [st.det], st.unknowns)
        if not free:
            return np.zeros((0, len(st.unknowns))), np.zeros((0, 2), dtype=int)
        detf = _NumPoly(st.det, st.unknowns)
        D = np.full(len(X), np.nan)
        D[ok] = detf(X[ok])
        Dg = D.reshape(shape)
        Xg = X.reshape(shape + (X.shape[1],))
        crossings = []   # (axis, multi-index) -> point id
        seeds = []
        ids = {}
        for axis in range(len(shape)):
            a = [slice(None)] * len(shape)
            b = [slice(None)] * len(shape)
            a[axis] = slice(0, -1)
            b[axis] = slice(1, None)
            Da, Db = Dg[tuple(a)], Dg[tuple(b)]
            with np.errstate(invalid="ignore"):
                # zero counts as positive so every cell sees an even number of crossings
                mask = np.isfinite(Da) & np.isfinite(Db) & ((Da >= 0) != (Db >= 0))
            for mi in zip(*np.nonzero(mask)):
                da, db = Dg[mi], Dg[tuple(m + (1 if i == axis else 0) for i, m in enumerate(mi))]
                t = 0.0 if da == db else da / (da - db)
                xa = Xg[mi]
                xb = Xg[tuple(m + (1 if i == axis else 0) for i, m in enumerate(mi))]
                ids[(axis, mi)] = len(seeds)
                seeds.append(xa + t * (xb - xa))
        if not seeds:
            return np.zeros((0, len(st.unknowns))), np.zeros((0, 2), dtype=int)
        S = np.array(seeds)
        # seeds on the box boundary keep that coordinate so they are not polished out of the region
        on_edge = self._on_boundary(S, st.unknowns)
        P, good = _least_norm_polish(full, S, self.cfg, on_edge)
        retry = ~good & on_edge.any(axis=1)
        if retry.any():
            P[retry], good[retry] = _least_norm_polish(full, S[retry], self.cfg)
        self.dropped += int((~good).sum())
        edges = []
        if len(shape) == 2:
            cells = {}
            for (axis, mi), pid in ids.items():
                i, j = mi
                # an axis-0 edge (i,j)-(i+1,j) borders cells (i, j-1) and (i, j)
                if axis == 0:
                    for c in ((i, j - 1), (i, j)):
                        cells.setdefault(c, []).append(pid)
                else:
                    for c in ((i - 1, j), (i, j)):
                        cells.setdefault(c, []).append(pid)
            for c in sorted(cells):
                members = cells[c]
                if len(members) == 2:
                    edges.append(members)
                elif len(members) == 4:
                    m = sorted(members)
                    d = lambda u, v: np.linalg.norm(P[u] - P[v])
                    pairs = min([((m[0], m[1]), (m[2], m[3])), ((m[0], m[2]), (m[1], m[3])),
                                 ((m[0], m[3]), (m[1], m[2]))],
                                key=lambda pr: d(*pr[0]) + d(*pr[1]))
                    edges.extend([list(pairs[0]), list(pairs[1])])
        edges = np.array([e for e in edges if good[e[0]] and good[e[1]]], dtype=int).reshape(-1, 2)
        return self._finish(st, full, P, good, edges)

    def _finish(self, st, sys, X, ok, edges):
        """Refine one-dimensional pieces, then filter by region and corner sign."""
        X = np.asarray(X)
        if len(edges) and self.cfg.refine_spacing > 0:
            X, ok, edges = self._refine(st, sys, X, ok, np.asarray(edges))
        keep = ok & self._inside(X, st.unknowns)
        return X[keep], edges

    def _image(self, X, unknowns):
        cols = [unknowns.index(n) for n in self.base_names]
        return X[:, cols]

    def _refine(self, st, sys, X, ok, edges):
        X = list(X)
        ok = list(ok)
        unknowns = st.unknowns
        margin = {n: 0.05 * (hi - lo) for n, (lo, hi) in self.region.items()}
        todo = edges
        for _ in range(self.cfg.max_refine_depth):
            if not len(todo):
                break
            A = np.array([X[i] for i in todo[:, 0]])
            B = np.array([X[i] for i in todo[:, 1]])
            ia, ib = self._image(A, unknowns), self._image(B, unknowns)
            far = np.linalg.norm(ia - ib, axis=1) > self.cfg.refine_spacing
            near_region = np.ones(len(todo), dtype=bool)
            for j, n in enumerate(self.base_names):
                lo, hi = self.region[n]
                inside = lambda v: (v >= lo - margin[n]) & (v <= hi + margin[n])
                near_region &= inside(ia[:, j]) | inside(ib[:, j])
            sel = far & near_region
            if not sel.any():
                break
            mids = 0.5 * (A[sel] + B[sel])
            Pm, good = _least_norm_polish(sys, mids, self.cfg)
            new = []
            for (a, b), pm, g in zip(todo[sel], Pm, good):
                if not g:
                    self.dropped += 1
                    continue
                mid = len(X)
                X.append(pm)
                ok.append(True)
                new.append((a, mid))
                new.append((mid, b))
            todo = np.array(new, dtype=int).reshape(-1, 2)
        return np.array(X), np.array(ok, dtype=bool), edges

    def run(self, strata, kind_label):
        names = self.F.names
        pts, labels, wits = [], [], []
        for st in strata:
            if kind_label == "sheet":
                X, _ = self.sample_sheet(st)
            elif st.det is not None:
                X, _ = self.degenerate_locus(st)
            else:
                X, _ = self.sample_sheet(st)
            if not len(X):
                continue
            W = np.zeros((len(X), len(names)))
            for j, u in enumerate(st.unknowns):
                W[:, names.index(u)] = X[:, j]
            img = self._image(X, st.unknowns)
            order = np.lexsort(img.T[::-1]) if len(img) else []
            pts.append(img[order])
            wits.append(W[order])
            labels.extend([st.label] * len(X))
        if pts:
            P = np.concatenate(pts)
            W = np.concatenate(wits)
        else:
            P = np.zeros((0, len(self.base_names)))
            W = np.zeros((0, len(names)))
        order = sorted(range(len(labels)), key=lambda i: (tuple(P[i]), labels[i]))
        P = P[order] if len(order) else P
        W = W[order] if len(order) else W
        labels = [labels[i] for i in order]
        meta = {"res": self.res, "tol_eq": self.cfg.tol_eq, "dropped": self.dropped,
                "region": {n: list(v) for n, v in self.region.items()}}
        return DiscriminantMesh(tuple(self.base_names), P, labels, W, names, meta)


def _dedupe(P, tol=1e-7):
    out = []
    for p in P:
        if not any(np.linalg.norm(p - q) < tol for q in out):
            out.append(p)
    return np.array(out).reshape(-1, P.shape[1] if P.ndim == 2 else 0)


def _subsets(r):
    for size in range(r + 1):
        yield from itertools.combinations(range(r), size)


def _free_unknowns(F, zero_x, extra=()):
    base = [n for n in F.names if n not in zero_x]
    return tuple(n for n in base if n not in extra)


def caustic(family: GeneratingFamily, region, res: int = 200, config: SolverConfig | None = None) -> DiscriminantMesh:
    """Caustic of a Lagrangian generating family over a box in q-space.

    Strata: ``C_sigma`` (degenerate critical points on the stratum where
    ``x_sigma = 0``) and ``Q_sigma_tau`` for adjacent pairs ``tau = sigma + {i}``.
    """
    if family.kind != LAGRANGIAN:
        raise ValueError("caustic needs a Lagrangian family")
    if family.r > 2:
        raise ValueError("meshing supports r <= 2")
    ex = _Extractor(family, region, res, config)
    F = family.F
    xs, ys = ex.xs, ex.ys
    strata = []
    for sigma in _subsets(family.r):
        zero_x = [xs[i] for i in sigma]
        Fs = ex._restricted(zero_x)
        v = [x for x in xs if x not in zero_x] + ys
        if v:
            eqs = [derivative(Fs, a) for a in v]
            unknowns = _free_unknowns(F, zero_x)
            st = _Stratum(f"C_{stratum_label(sigma)}", _System(eqs, unknowns), unknowns, [],
                          det=_hessian_det(Fs, v))
            strata.append(st)
        for i in range(family.r):
            if i in sigma:
                continue
            tau = tuple(sorted(sigma + (i,)))
            zt = [xs[j] for j in tau]
            eqs = [substitute(derivative(Fs, a), {xs[i]: F.const(0)}) for a in v]
            unknowns = _free_unknowns(F, zt)
            strata.append(_Stratum(f"Q_{stratum_label(sigma)}_{stratum_label(tau)}",
                                   _System(eqs, unknowns), unknowns, []))
    return ex.run(strata, "caustic")


def wavefront(family: GeneratingFamily, region, res: int = 200, config: SolverConfig | None = None) -> DiscriminantMesh:
    """Wavefront of a Legendrian family over a box in (q, z)-space; strata ``W_sigma``."""
    if family.kind != LEGENDRIAN:
        raise ValueError("wavefront needs a Legendrian family")
    if family.r > 2:
        raise ValueError("meshing supports r <= 2")
    ex = _Extractor(family, region, res, config)
    F = family.F
    strata = []
    for sigma in _subsets(family.r):
        zero_x = [ex.xs[i] for i in sigma]
        Fs = ex._restricted(zero_x)
        v = [x for x in ex.xs if x not in zero_x] + ex.ys
        eqs = [derivative(Fs, a) for a in v] + [Fs]
        unknowns = _free_unknowns(F, zero_x)
        strata.append(_Stratum(f"W_{stratum_label(sigma)}", _System(eqs, unknowns), unknowns, []))
    return ex.run(strata, "sheet")
