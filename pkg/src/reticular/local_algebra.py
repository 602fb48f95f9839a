"""Tangent modules, codimension and finite determinacy of germs on an r-corner.

Everything is linear algebra inside a jet space ``J^l`` of the germ ring.
A computation at level ``l`` is *certified* when every degree-``l``
monomial already lies in the tangent module modulo ``M^{l+1}``; Nakayama's
lemma then gives ``M^l`` inside the module, so the truncated quotient is
the true one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .jet_algebra import CornerPoly, JetSpace, derivative, monomials_up_to, multiply, truncate
from .linalg import EchelonBasis

__all__ = [
    "INFINITE",
    "IndeterminateError",
    "TangentModule",
    "QuotientReport",
    "tangent_module",
    "codimension",
    "determinacy_bound",
    "membership",
    "DEFAULT_CAP",
]

INFINITE = "INFINITE"
DEFAULT_CAP = 12
_MODES = {"R": "R", "Rplus": "R", "R+": "R", "K": "K"}


class IndeterminateError(RuntimeError):
    """The truncation in use cannot certify the requested answer."""


def _mode(mode: str) -> str:
    try:
        return _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected R, Rplus or K") from None


def _check_germ(f: CornerPoly, mode: str) -> None:
    if f.params:
        raise ValueError("germs live in E(r;k): parameters are not allowed here")
    if f.constant_term():
        raise ValueError(f"germ {f} has a nonzero constant term")
    if mode == "R" and f.order() == 1:
        raise ValueError(f"germ {f} has a nonzero 1-jet and is not in M(r;k)^2")


def _generators(f: CornerPoly, mode: str) -> list:
    gens = []
    if mode == "K":
        gens.append(f)
    for i in range(f.r):
        gens.append(multiply(f.var(f.names[i]), derivative(f, i)))
    for j in range(f.k):
        gens.append(derivative(f, f.r + j))
    return [g for g in gens if not g.is_zero()]


def _module_rows(gens, space: JetSpace, min_mult_degree: int = 0):
    """Jets of ``m * g`` for monomials ``m`` of degree >= min_mult_degree."""
    l = space.l
    n = space.nvars
    for g in gens:
        og = g.order()
        if og < 0 or og > l:
            continue
        for m in monomials_up_to(n, l - og, min_mult_degree):
            mono = g.like({m: 1})
            yield space.vector(multiply(mono, g, l))


@dataclass
class TangentModule:
    """Span of the R- or K-tangent module of a germ inside ``J^l``."""

    mode: str
    germ: CornerPoly
    l: int
    generators: list
    space: JetSpace
    echelon: EchelonBasis = field(repr=False)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def certified(self) -> bool:
        """True when every degree-l monomial lies in the span (so ``M^l`` is inside)."""
        top = [i for i, m in enumerate(self.space.basis) if sum(m) == self.l]
        return all(i in self.echelon.pivots for i in top)

    def quotient_columns(self) -> list:
        return self.echelon.free_columns()

    def contains(self, g: CornerPoly) -> bool:
        return self.echelon.contains(self.space.vector(g))


def tangent_module(f: CornerPoly, mode: str = "R", l: int = 4) -> TangentModule:
    """R-module ``<x df/dx, df/dy>`` or K-module ``<f, x df/dx, df/dy>`` in ``J^l``."""
    mode = _mode(mode)
    _check_germ(f, mode)
    if l < 1:
        raise ValueError("truncation degree must be >= 1")
    space = JetSpace(f.nvars, l, 0, f.names)
    gens = _generators(f, mode)
    eb = EchelonBasis(space.dim)
    eb.extend(_module_rows(gens, space))
    return TangentModule(mode, f, l, gens, space, eb)


@dataclass
class QuotientReport:
    mode: str
    codim: object
    basis: list
    l_used: int
    stabilized: bool
    basis_polys: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "codim": self.codim,
            "basis": list(self.basis),
            "l_used": self.l_used,
            "stabilized": self.stabilized,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _quotient(T: TangentModule, plus: bool):
    cols = T.quotient_columns()
    space = T.space
    monos = [space.basis[c] for c in cols]
    if plus:
        monos = [m for m in monos if sum(m) > 0]
    return monos


def codimension(f: CornerPoly, mode: str = "Rplus", cap: int = DEFAULT_CAP, l_start: int | None = None) -> QuotientReport:
    """Reticular R+- or K-codimension of ``f`` with a monomial quotient basis.

    R+ drops the constant from the basis, K keeps it.  The truncation is
    raised until the answer is certified and agrees with the next level;
    if the cap is reached first the codimension is reported as INFINITE.
    """
    label = "K" if _mode(mode) == "K" else "Rplus"
    m = _mode(mode)
    _check_germ(f, m)
    plus = m == "R"
    l = l_start or max(2, f.order())
    prev = None
    while l <= cap:
        T = tangent_module(f, m, l)
        if T.certified:
            monos = _quotient(T, plus)
            if prev is not None and prev == monos:
                return _report(f, label, monos, l - 1, True)
            prev = monos
            if l == cap:
                return _report(f, label, monos, l, True)
        else:
            prev = None
        l += 1
    T = tangent_module(f, m, cap)
    monos = _quotient(T, plus)
    return QuotientReport(label, INFINITE, [_mono_str(f, e) for e in monos], cap, False,
                          [f.like({e: 1}) for e in monos])


def _mono_str(f: CornerPoly, e) -> str:
    return str(f.like({e: 1}))


def _report(f, label, monos, l, stabilized) -> QuotientReport:
    return QuotientReport(
        label, len(monos), [_mono_str(f, e) for e in monos], l, stabilized,
        [f.like({e: 1}) for e in monos],
    )


def _determinacy_holds(f: CornerPoly, mode: str, l: int) -> bool:
    space = JetSpace(f.nvars, l + 1, 0, f.names)
    outer = [multiply(f.var(f.names[i]), derivative(f, i)) for i in range(f.r)]
    if mode == "K":
        outer = [f] + outer
    inner = [derivative(f, f.r + j) for j in range(f.k)]
    eb = EchelonBasis(space.dim)
    eb.extend(_module_rows([g for g in outer if not g.is_zero()], space, 1))
    eb.extend(_module_rows([g for g in inner if not g.is_zero()], space, 2))
    top = [i for i, mono in enumerate(space.basis) if sum(mono) == l + 1]
    return all(i in eb.pivots for i in top)


def determinacy_bound(f: CornerPoly, mode: str = "R", l_max: int = DEFAULT_CAP):
    """Least ``l <= l_max`` passing the sufficient determinacy inclusion, else ``"FAIL"``.

    R: ``M^{l+1} ⊂ M(<x df/dx> + M<df/dy>) + M^{l+2}``;
    K: the same with ``f`` added to the first bracket.
    """
    m = _mode(mode)
    _check_germ(f, m)
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    for l in range(1, l_max + 1):
        if _determinacy_holds(f, m, l):
            return l
    return "FAIL"


def membership(g: CornerPoly, T: TangentModule, extra: Sequence[CornerPoly] = ()) -> bool:
    """Whether ``g`` lies in ``T + R-span(extra)``.

    A negative answer is always final.  A positive answer needs ``T`` to
    be certified at its truncation, otherwise :class:`IndeterminateError`.
    """
    if g.ring != T.germ.ring:
        raise ValueError("g and the tangent module live in different rings")
    eb = T.echelon.copy()
    for e in extra:
        eb.add(T.space.vector(truncate(e, T.l)))
    if not eb.contains(T.space.vector(g)):
        return False
    if not T.certified:
        raise IndeterminateError(
            f"the {T.l}-jet lies in the span but the module is not certified at that truncation")
    return True
