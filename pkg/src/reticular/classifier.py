"""Splitting lemma and recognition of the simple classes A/D/E (r=0) and B/C/F (r=1).

Recognition works from invariants (corank, vanishing orders, the real root
structure of the cubic form, signs of leading coefficients) and is
certified by comparing the codimension of the input germ with the value
the recognized class must have.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .jet_algebra import CornerPoly, derivative, substitute, truncate, variable_names
from .local_algebra import INFINITE, codimension, determinacy_bound

__all__ = [
    "NOT_SIMPLE",
    "UnsupportedError",
    "GermClass",
    "SplitReport",
    "split",
    "classify",
    "is_simple",
    "expected_codimension",
    "parse_label",
]

NOT_SIMPLE = "NOT_SIMPLE"
DEFAULT_ORDER = 10


class UnsupportedError(ValueError):
    """Classification outside r in {0, 1}."""


@dataclass(frozen=True)
class GermClass:
    series: str
    index: int
    sign: str | None
    mode: str
    corank: int = 0
    codim: int = 0

    @property
    def label(self) -> str:
        if self.mode == "K" and self.series == "C" and self.sign:
            return f"C{self.index}e{self.sign}"
        return f"{self.series}{self.index}{self.sign or ''}"

    def __str__(self):
        return self.label

    def same_class(self, other) -> bool:
        return isinstance(other, GermClass) and (self.series, self.index, self.sign, self.mode) == (
            other.series, other.index, other.sign, other.mode)

    def to_dict(self) -> dict:
        return {"class": self.label, "series": self.series, "index": self.index, "sign": self.sign,
                "mode": self.mode, "corank": self.corank, "codim": self.codim}


def _keeps_sign(series: str, index: int, mode: str) -> bool:
    if mode == "K":
        if series == "C":
            return index % 2 == 1
        if series == "D":
            return index % 2 == 0
        return False
    if series == "A":
        return index % 2 == 1 and index >= 3
    return True


def expected_codimension(series: str, index: int, mode: str) -> int:
    """R+-codimension of the class (K adds the constant)."""
    base = 3 if series == "F" else index - 1
    return base + 1 if mode == "K" else base


def parse_label(label: str, mode: str = "R") -> GermClass:
    """Inverse of :attr:`GermClass.label` (``"C3e+"``, ``"D5-"``, ``"A2"``...)."""
    s = label.strip()
    series = s[0]
    rest = s[1:].replace("e", "")
    sign = None
    if rest and rest[-1] in "+-":
        sign = rest[-1]
        rest = rest[:-1]
    return GermClass(series, int(rest), sign, mode)


def _make(series, index, raw_sign, mode, corank) -> GermClass:
    sign = raw_sign if _keeps_sign(series, index, mode) else None
    return GermClass(series, index, sign, mode, corank, expected_codimension(series, index, mode))


# -- splitting ----------------------------------------------------------------
@dataclass
class SplitReport:
    residual: CornerPoly
    quad_rank: int
    quad_signature: tuple
    change_log: list = field(default_factory=list)


def _y_hessian(f: CornerPoly) -> list:
    k, r = f.k, f.r
    H = [[Fraction(0)] * k for _ in range(k)]
    for exps, c in f.terms.items():
        if sum(exps) != 2:
            continue
        ys = [j for j in range(k) if exps[r + j]]
        if len(ys) == 1 and exps[r + ys[0]] == 2:
            H[ys[0]][ys[0]] = Fraction(2 * c)
        elif len(ys) == 2:
            a, b = ys
            H[a][b] = H[b][a] = Fraction(c)
    return H


def _congruence_diagonalize(H: list):
    """Rational P with P^T H P diagonal, nonzero entries first.  Returns (P, diag)."""
    k = len(H)
    A = [row[:] for row in H]
    P = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]

    def add_col(dst, src, f):
        # y_dst-coordinate change: column op on P and congruence on A.
        for i in range(k):
            P[i][dst] += f * P[i][src]
        for i in range(k):
            A[i][dst] += f * A[i][src]
        for j in range(k):
            A[dst][j] += f * A[src][j]

    def swap(a, b):
        for row in P:
            row[a], row[b] = row[b], row[a]
        A[a], A[b] = A[b], A[a]
        for row in A:
            row[a], row[b] = row[b], row[a]

    t = 0
    while t < k:
        piv = next((i for i in range(t, k) if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(t, k) for j in range(i + 1, k) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            add_col(i, j, Fraction(1))
            piv = i
        if piv != t:
            swap(piv, t)
        for j in range(t + 1, k):
            if A[t][j] != 0:
                add_col(j, t, -A[t][j] / A[t][t])
        t += 1
    diag = [A[i][i] for i in range(k)]
    return P, diag


def split(f: CornerPoly, l: int = DEFAULT_ORDER) -> SplitReport:
    """Remove the nondegenerate quadratic part in the y-variables.

    The y-Hessian is diagonalized by a rational congruence, the
    nondegenerate directions ``w`` are eliminated by solving ``df/dw = 0``
    as a power series in the remaining variables (truncated at ``l``), and
    the residual is ``f`` restricted to that critical graph.  Corner
    variables are never touched.
    """
    if f.params:
        raise ValueError("split expects a germ without parameters")
    r, k = f.r, f.k
    log = []
    H = _y_hessian(f)
    P, diag = _congruence_diagonalize(H)
    s = sum(1 for d in diag if d != 0)
    pos = sum(1 for d in diag if d > 0)
    if s == 0:
        return SplitReport(truncate(f, l), 0, (0, 0), ["no quadratic y-part"])
    # y = P w, written in the same ring (w reuses the names y1..yk).
    bindings = {}
    for i in range(k):
        img = f.const(0)
        for j in range(k):
            if P[i][j]:
                img = img + f.var(f'y{j + 1}') * P[i][j]
        bindings[f"y{i + 1}"] = img
    g = substitute(f, bindings, l)
    log.append("linear change y = P w with P = " + str([[str(v) for v in row] for row in P]))
    # eliminate w_1..w_s
    wnames = [f"y{j + 1}" for j in range(s)]
    phi = {name: g.const(0) for name in wnames}
    grads = [derivative(g, name) for name in wnames]
    # each pass fixes one more degree of phi, so pass t only needs degree t + 1
    for t in range(1, l + 2):
        lt = min(l, t + 1)
        new = {}
        for j, name in enumerate(wnames):
            gj = substitute(grads[j], phi, lt)
            new[name] = truncate(phi[name] - gj * (1 / diag[j]), lt)
        if lt == l and all(new[n] == phi[n] for n in wnames):
            break
        phi = new
    resid_full = substitute(g, phi, l)
    # drop the eliminated variables from the ring
    kept = k - s
    out = {}
    for exps, c in resid_full.terms.items():
        if any(exps[r + j] for j in range(s)):
            raise AssertionError("eliminated variable survived in the residual")
        out[tuple(exps[:r]) + tuple(exps[r + s:])] = c
    residual = CornerPoly(r, kept, (), out)
    log.append(f"eliminated {s} nondegenerate direction(s); residual in {variable_names(r, kept)}")
    return SplitReport(residual, s, (pos, s - pos), log)


# -- recognition helpers ------------------------------------------------------
def _sgn(c) -> str:
    return "+" if c > 0 else "-"


def _poly_gcd(a: list, b: list) -> list:
    """gcd of univariate polynomials given as coefficient lists (lowest degree first)."""
    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        while len(a) >= len(b) and a:
            f = Fraction(a[-1]) / b[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] -= f * c
            a = trim(a)
        a, b = b, a
    return a


def _cubic_coeffs(g: CornerPoly):
    """(a, b, c, d) with cubic part a*y1^3 + b*y1^2*y2 + c*y1*y2^2 + d*y2^3 (r = 0, k = 2)."""
    return tuple(Fraction(g.coeff((3 - i, i))) for i in range(4))


def _binary_cubic_discriminant(a, b, c, d):
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _double_root_direction(a, b, c, d):
    """Rational direction v with grad(cubic)(v) = 0 (the repeated linear factor's kernel)."""
    # d/dy1: 3a y1^2 + 2b y1 y2 + c y2^2 ; d/dy2: b y1^2 + 2c y1 y2 + 3d y2^2
    if c == 0 and d == 0:
        return (Fraction(0), Fraction(1))
    # points (1, t): coefficient lists in t
    p1 = [3 * a, 2 * b, c]
    p2 = [b, 2 * c, 3 * d]
    gg = _poly_gcd(p1, p2)
    if len(gg) == 2:
        t = -Fraction(gg[0]) / gg[1]
    elif len(gg) == 3:
        # triple factor: the gcd is a square
        t = -Fraction(gg[1]) / (2 * gg[2])
    else:
        raise ValueError("cubic has no repeated linear factor")
    return (Fraction(1), t)


def _linear_change(g: CornerPoly, A) -> CornerPoly:
    """Rewrite g (r=0, k=2) in coordinates Y = A y, i.e. substitute y = A^{-1} Y."""
    (a11, a12), (a21, a22) = A
    det = a11 * a22 - a12 * a21
    inv = ((a22 / det, -a12 / det), (-a21 / det, a11 / det))
    y1, y2 = g.var("y1"), g.var("y2")
    return substitute(g, {"y1": y1 * inv[0][0] + y2 * inv[0][1], "y2": y1 * inv[1][0] + y2 * inv[1][1]},
                      max(g.degree(), 0))


def _d_series_tail(g: CornerPoly, l: int):
    """For g = y1^2 y2 + h.o.t., restrict g to the smooth branch of dg/dy1 = 0.

    Returns the univariate restriction as a polynomial in y2 (r=0, k=2 ring).
    """
    y2 = g.var("y2")
    rest = derivative(g - g.var("y1") ** 2 * y2, "y1")
    psi = g.const(0)
    for _ in range(l + 2):
        num = truncate(substitute(rest, {"y1": psi}, l + 1), l + 1)
        quo = {}
        for exps, c in num.terms.items():
            if exps[0] or exps[1] == 0:
                raise AssertionError("series division by y2 failed")
            quo[(0, exps[1] - 1)] = -Fraction(c) / 2
        new = truncate(g.like(quo), l)
        if new == psi:
            break
        psi = new
    return truncate(substitute(g, {"y1": psi}, l), l)


def _univariate_lead(p: CornerPoly, var: int):
    best = None
    for exps, c in p.terms.items():
        if best is None or exps[var] < best[0]:
            best = (exps[var], c)
    return best


def _recognize_r0(res: SplitReport, mode: str, l: int):
    g = res.residual
    corank = g.k
    if corank == 0:
        return _make("A", 1, None, mode, 0)
    if corank == 1:
        if g.is_zero():
            return None
        m, c = _univariate_lead(g, 0)
        return _make("A", m - 1, _sgn(c), mode, 1)
    if corank > 2:
        return None
    a, b, c, d = _cubic_coeffs(g)
    if (a, b, c, d) == (0, 0, 0, 0):
        return None
    disc = _binary_cubic_discriminant(a, b, c, d)
    if disc > 0:
        return _make("D", 4, "-", mode, 2)
    if disc < 0:
        return _make("D", 4, "+", mode, 2)
    v1, v2 = _double_root_direction(a, b, c, d)
    # linear form vanishing on the repeated direction
    L1 = (v2, -v1)
    q1, q2 = _cofactor(a, b, c, d, L1)
    if q1 * L1[1] - q2 * L1[0] == 0:
        # triple factor: E-series.  Sign of the quartic part on the kernel line.
        quartic = g.homogeneous_part(4)
        e = quartic.evaluate({"y1": v1, "y2": v2})
        if e == 0:
            return None
        return _make("E", 6, _sgn(e), mode, 2)
    gY = _linear_change(truncate(g, l), ((L1[0], L1[1]), (q1, q2)))
    tail = _d_series_tail(gY, l)
    if tail.is_zero():
        return None
    m, c = _univariate_lead(tail, 1)
    return _make("D", m + 1, _sgn(c), mode, 2)


def _cofactor(a, b, c, d, L):
    """Linear form (g1, g2) with cubic = (L . y)^2 (g . y)."""
    al, be = L
    if al:
        g1 = a / (al * al)
        g2 = (b - 2 * al * be * g1) / (al * al)
    else:
        g2 = d / (be * be)
        g1 = (c - 2 * al * be * g2) / (be * be)
    return g1, g2


def _recognize_r1(res: SplitReport, mode: str):
    g = res.residual
    corank = g.k
    if corank == 0:
        if g.is_zero():
            return None
        m, c = _univariate_lead(g, 0)
        return _make("B", m, _sgn(c), mode, 0)
    if corank > 1:
        return None
    s = g.coeff((1, 1))
    alpha = g.coeff((2, 0))
    boundary = g.like({e: c for e, c in g.terms.items() if e[0] == 0})
    if s:
        if boundary.is_zero():
            return None
        l, a = _univariate_lead(boundary, 1)
        return _make("C", l, _sgn(a * s ** l), mode, 1)
    if alpha and g.coeff((0, 3)):
        return _make("F", 4, _sgn(alpha), mode, 1)
    return None


def _recognize(f: CornerPoly, mode: str, l: int):
    if f.r not in (0, 1):
        raise UnsupportedError("only r = 0 and r = 1 have simple lists")
    res = split(f, l)
    guess = _recognize_r0(res, mode, l) if f.r == 0 else _recognize_r1(res, mode)
    return res, guess


def classify(f: CornerPoly, mode: str = "R", l: int = DEFAULT_ORDER):
    """Recognize the simple class of ``f`` or return :data:`NOT_SIMPLE`.

    ``mode`` is ``"R"`` (signs kept as under right equivalence) or ``"K"``
    (signs absorbed by units where possible).
    """
    mode = "K" if mode == "K" else "R"
    if f.params:
        raise ValueError("classify expects a germ without parameters")
    if f.constant_term() or f.order() == 1:
        raise ValueError(f"germ {f} is not in M(r;k)^2")
    _, guess = _recognize(f, mode, l)
    if guess is None:
        return NOT_SIMPLE
    rep = codimension(truncate(f, l), "K" if mode == "K" else "Rplus", cap=l)
    if rep.codim == INFINITE or rep.codim != guess.codim:
        return NOT_SIMPLE
    return guess


def is_simple(f: CornerPoly, mode: str = "R") -> bool:
    return classify(f, mode) != NOT_SIMPLE


def classification_report(f: CornerPoly, mode: str = "R") -> dict:
    cls = classify(f, mode)
    rep = codimension(f, "K" if mode == "K" else "Rplus")
    det = determinacy_bound(f, "K" if mode == "K" else "R")
    return {
        "class": cls.label if isinstance(cls, GermClass) else NOT_SIMPLE,
        "codim": rep.codim,
        "determinacy": det,
    }


def class_to_json(cls) -> str:
    return json.dumps(cls.to_dict() if isinstance(cls, GermClass) else {"class": NOT_SIMPLE})
