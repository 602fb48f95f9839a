"""Miniversal unfoldings and infinitesimal versality of generating families."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .classifier import NOT_SIMPLE, GermClass, UnsupportedError, classify
from .jet_algebra import CornerPoly, derivative
from .local_algebra import INFINITE, IndeterminateError, codimension, determinacy_bound, membership, tangent_module

__all__ = [
    "LAGRANGIAN",
    "LEGENDRIAN",
    "GeneratingFamily",
    "VersalityReport",
    "build_versal",
    "check_versality",
    "versality_report",
    "stability_verdict",
]

LAGRANGIAN = "Lagrangian"
LEGENDRIAN = "Legendrian"


def _kind(kind: str) -> str:
    k = kind.lower()
    if k.startswith("lag"):
        return LAGRANGIAN
    if k.startswith("leg"):
        return LEGENDRIAN
    raise ValueError(f"unknown family kind {kind!r}")


@dataclass(frozen=True)
class GeneratingFamily:
    """``F(x, y, q[, z])``; every parameter other than ``z`` counts towards ``n``."""

    F: CornerPoly
    kind: str = LAGRANGIAN

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.kind == LEGENDRIAN and "z" not in self.F.params:
            raise ValueError("a Legendrian family needs the parameter z")
        if self.kind == LAGRANGIAN and "z" in self.F.params:
            raise ValueError("a Lagrangian family must not involve z")

    @property
    def r(self) -> int:
        return self.F.r

    @property
    def k(self) -> int:
        return self.F.k

    @property
    def unfolding_params(self) -> tuple:
        return tuple(p for p in self.F.params if p != "z")

    @property
    def n(self) -> int:
        return len(self.unfolding_params)

    @property
    def base(self) -> CornerPoly:
        """``F`` with all parameters set to zero, as a germ in ``E(r;k)``."""
        return _set_zero(self.F, self.F.params)

    def param_derivatives(self) -> list:
        """``dF/du_i`` at ``u = 0`` for each parameter (``z`` included, in order)."""
        return [_set_zero(derivative(self.F, p), self.F.params) for p in self.F.params]

    def drop_parameter(self, name: str) -> "GeneratingFamily":
        """The family with ``name`` frozen at 0 and removed from the parameter list.

        Freezing ``z`` leaves a family without a contact direction, which is
        returned with Lagrangian shape.
        """
        kind = LAGRANGIAN if name == "z" else self.kind
        return GeneratingFamily(_set_zero(self.F, (name,)), kind)

    def __str__(self):
        return str(self.F)


def _set_zero(F: CornerPoly, zero) -> CornerPoly:
    """Set the parameters ``zero`` to 0 and drop them from the ring."""
    params = F.params
    for name in zero:
        F.index(name)
    idx = [F.r + F.k + i for i, p in enumerate(params) if p in zero]
    keep_idx = [i for i in range(F.nvars) if i not in idx]
    terms = {}
    for e, c in F.terms.items():
        if any(e[i] for i in idx):
            continue
        terms[tuple(e[i] for i in keep_idx)] = c
    return CornerPoly(F.r, F.k, tuple(p for p in params if p not in zero), terms)


def _mode(mode: str) -> str:
    if mode in ("Rplus", "R+", "R"):
        return "Rplus"
    if mode == "K":
        return "K"
    raise ValueError(f"unknown mode {mode!r}; expected Rplus or K")


def build_versal(f: CornerPoly, mode: str = "Rplus", kind: str | None = None, prefix: str = "u") -> GeneratingFamily:
    """``f + sum basis_i * u_i`` from the monomial quotient basis.

    Rplus leaves out the constant.  In K mode with a Legendrian family the
    constant direction becomes the parameter ``z``; without ``kind`` the K
    family is Legendrian.
    """
    mode = _mode(mode)
    rep = codimension(f, mode)
    if rep.codim == INFINITE:
        raise ValueError(f"germ {f} has infinite {mode}-codimension; no versal unfolding exists")
    kind = _kind(kind) if kind else (LEGENDRIAN if mode == "K" else LAGRANGIAN)
    basis = list(rep.basis_polys)
    # highest-degree directions get the smallest parameter index, as in the normal-form tables
    basis.sort(key=lambda p: (-p.degree(),))
    nonconst = [b for b in basis if b.degree() > 0]
    has_const = any(b.degree() == 0 for b in basis)
    names = [f"{prefix}{i + 1}" for i in range(len(nonconst))]
    if kind == LEGENDRIAN:
        names.append("z")
    params = tuple(names)
    lift = CornerPoly(f.r, f.k, params, {tuple(e) + (0,) * len(params): c for e, c in f.terms.items()})
    total = lift
    for i, b in enumerate(nonconst):
        for e, c in b.terms.items():
            ex = list(e) + [0] * len(params)
            ex[f.nvars + i] = 1
            total = total + lift.like({tuple(ex): c})
    if kind == LEGENDRIAN:
        if mode == "K" and not has_const:
            raise AssertionError("K quotient always contains the constants")
        total = total + lift.var("z")
    return GeneratingFamily(total, kind)


@dataclass
class VersalityReport:
    versal: bool
    codim: object
    cls: object
    determinacy: object
    l_used: int
    reasons: list = field(default_factory=list)

    def to_dict(self) -> dict:
        cls = self.cls.label if isinstance(self.cls, GermClass) else self.cls
        return {"versal": self.versal, "codim": self.codim, "class": cls, "determinacy": self.determinacy,
                "l_used": self.l_used, "reasons": list(self.reasons)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check(F: GeneratingFamily, mode: str, max_l: int = 14):
    """Returns (verdict, l_used, reasons)."""
    mode = _mode(mode)
    base = F.base
    reasons = []
    if mode == "Rplus" and base.order() == 1:
        return False, 0, ["base germ has a nonzero 1-jet"]
    rep = codimension(base, mode)
    if rep.codim == INFINITE:
        return False, rep.l_used, ["base germ has INFINITE codimension"]
    det = determinacy_bound(base, "K" if mode == "K" else "R")
    l = max(det if det != "FAIL" else rep.l_used, F.n + 2, rep.l_used)
    extras = F.param_derivatives()
    if mode == "Rplus":
        extras = [base.const(1)] + extras
    while True:
        T = tangent_module(base, "K" if mode == "K" else "R", l)
        if T.certified:
            break
        if l >= max_l:
            raise IndeterminateError(f"tangent module not certified up to l={max_l}")
        l += 1
    missing = []
    for m in T.space.basis:
        mono = base.like({m: 1})
        if not membership(mono, T, extras):
            missing.append(str(mono) if sum(m) else "1")
    if missing:
        reasons.append("uncovered directions: " + ", ".join(missing))
        return False, l, reasons
    reasons.append(f"every monomial of degree <= {l} lies in T + span of parameter derivatives")
    return True, l, reasons


def check_versality(F: GeneratingFamily, mode: str = "Rplus") -> bool:
    """Infinitesimal versality of ``F`` at ``u = 0`` (exact, certified truncation)."""
    return _check(F, mode)[0]


def versality_report(F: GeneratingFamily, mode: str = "Rplus") -> VersalityReport:
    mode = _mode(mode)
    base = F.base
    reasons = []
    if base.order() == 1 and mode == "Rplus":
        return VersalityReport(False, INFINITE, NOT_SIMPLE, "FAIL", 0, ["base germ has a nonzero 1-jet"])
    rep = codimension(base, mode)
    det = determinacy_bound(base, "K" if mode == "K" else "R")
    try:
        cls = classify(base, "K" if mode == "K" else "R")
    except UnsupportedError:
        cls = "UNSUPPORTED"
    except ValueError:
        cls = NOT_SIMPLE
    versal, l, why = _check(F, mode)
    reasons.extend(why)
    return VersalityReport(versal, rep.codim, cls, det, l, reasons)


def stability_verdict(F: GeneratingFamily, mode: str | None = None) -> dict:
    """Stability of the associated reticular Lagrangian/Legendrian map.

    Decided through infinitesimal versality of the generating family, which
    is equivalent to stability of the map; the report says so in ``reasons``.
    """
    if mode is None:
        mode = "K" if F.kind == LEGENDRIAN else "Rplus"
    rep = versality_report(F, mode)
    out = rep.to_dict()
    out["stable"] = rep.versal
    out["codim_base"] = rep.codim
    out["reasons"] = out["reasons"] + [
        "stability of the map is equivalent to infinitesimal versality of its generating family"]
    return out
