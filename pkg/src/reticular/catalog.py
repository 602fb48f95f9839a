"""Normal forms of generic reticular Lagrangian and Legendrian maps as data.

Families are stored in the germ grammar with ``x = x1`` and ``y = y1``.
Known misprints in the printed tables are corrected in ``family`` while
the printed formula is kept verbatim in ``paper_label``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .jet_algebra import CornerPoly, parse_poly
from .unfoldings import LAGRANGIAN, LEGENDRIAN, GeneratingFamily

__all__ = ["CatalogEntry", "get", "list_entries", "keys", "LAGRANGIAN", "LEGENDRIAN"]


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    kind: str
    r: int
    k: int
    family: GeneratingFamily
    paper_label: str
    note: str = ""

    @property
    def mode(self) -> str:
        return "Rplus" if self.kind == LAGRANGIAN else "K"

    @property
    def classify_mode(self) -> str:
        return "R" if self.kind == LAGRANGIAN else "K"

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def germ(self) -> CornerPoly:
        return self.family.base

    def to_row(self) -> str:
        return "\t".join([self.key, str(self.r), self.kind, str(self.n), str(self.family.F)])


def _q(n):
    return [f"q{i + 1}" for i in range(n)]


# key, r, k, n, family text, printed formula, note
_LAG = [
    ("A2", 0, 1, 1, "y1^3+q1*y1", "A_2:F(y_1,q_1)=y_1^3+q_1y_1", ""),
    ("A3+", 0, 1, 2, "y1^4+q1*y1^2+q2*y1", "A^\\pm_3:F(y_1,q_1,q_2)=\\pm y_1^4+q_1y_1^2+q_2y_1", ""),
    ("A3-", 0, 1, 2, "-y1^4+q1*y1^2+q2*y1", "A^\\pm_3:F(y_1,q_1,q_2)=\\pm y_1^4+q_1y_1^2+q_2y_1", ""),
    ("A4", 0, 1, 3, "y1^5+q1*y1^3+q2*y1^2+q3*y1", "A_4:F(y_1,q_1,q_2,q_3)= y_1^5+q_1y_1^3+q_2y_1^2+q_3y_1", ""),
    ("A5+", 0, 1, 4, "y1^6+q1*y1^4+q2*y1^3+q3*y1^2+q4*y1",
     "A^\\pm_5:F(y_1,q_1,q_2,q_3,q_4)= \\pm y_1^6+q_1y_1^4+q_2y_1^3+q_3y_1^2+q_4y_1", ""),
    ("A5-", 0, 1, 4, "-y1^6+q1*y1^4+q2*y1^3+q3*y1^2+q4*y1",
     "A^\\pm_5:F(y_1,q_1,q_2,q_3,q_4)= \\pm y_1^6+q_1y_1^4+q_2y_1^3+q_3y_1^2+q_4y_1", ""),
    ("A6", 0, 1, 5, "y1^7+q1*y1^5+q2*y1^4+q3*y1^3+q4*y1^2+q5*y1",
     "A_6:F(y_1,q_1,q_2,q_3,q_4,q_5)= y_1^7+q_1y_1^5+q_2y_1^4+q_3y_1^3+q_4y_1^2+q_5y_1", ""),
    ("D4+", 0, 2, 3, "y1^2*y2+y2^3+q1*y2^2+q2*y2+q3*y1",
     "D^\\pm_4:F(y_1,y_2,q_1,q_2,q_3)= y_1^2y_2\\pm y_2^3+q_1y_2^2+q_2y_2+q_3y_1", ""),
    ("D4-", 0, 2, 3, "y1^2*y2-y2^3+q1*y2^2+q2*y2+q3*y1",
     "D^\\pm_4:F(y_1,y_2,q_1,q_2,q_3)= y_1^2y_2\\pm y_2^3+q_1y_2^2+q_2y_2+q_3y_1", ""),
    ("D5+", 0, 2, 4, "y1^2*y2+y2^4+q1*y2^3+q2*y2^2+q3*y2+q4*y1",
     "D^\\pm_5:F(y_1,y_2,q_1,q_2,q_3,q_4)= y_1^2y_2\\pm y_2^4+q_1y_2^3+q_2y_2^2+q_3y_2+q_4y_1", ""),
    ("D5-", 0, 2, 4, "y1^2*y2-y2^4+q1*y2^3+q2*y2^2+q3*y2+q4*y1",
     "D^\\pm_5:F(y_1,y_2,q_1,q_2,q_3,q_4)= y_1^2y_2\\pm y_2^4+q_1y_2^3+q_2y_2^2+q_3y_2+q_4y_1", ""),
    ("D6+", 0, 2, 5, "y1^2*y2+y2^5+q1*y2^4+q2*y2^3+q3*y2^2+q4*y2+q5*y1",
     "D^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5)= y_1^2y_2\\pm  y_2^5+q_1y_2^4+q_2y_2^3+q_3y_2^2+q_4y_2+q_5y_1", ""),
    ("D6-", 0, 2, 5, "y1^2*y2-y2^5+q1*y2^4+q2*y2^3+q3*y2^2+q4*y2+q5*y1",
     "D^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5)= y_1^2y_2\\pm  y_2^5+q_1y_2^4+q_2y_2^3+q_3y_2^2+q_4y_2+q_5y_1", ""),
    ("E6+", 0, 2, 5, "y1^3+y2^4+q1*y1*y2^2+q2*y1*y2+q3*y2^2+q4*y1+q5*y2",
     "E^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5)= y_1^3\\pm  y_2^4+q_1y_1y_2^2+q_2y_1y_2+q_3y_2^2+q_4y_1+q_5y_2", ""),
    ("E6-", 0, 2, 5, "y1^3-y2^4+q1*y1*y2^2+q2*y1*y2+q3*y2^2+q4*y1+q5*y2",
     "E^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5)= y_1^3\\pm  y_2^4+q_1y_1y_2^2+q_2y_1y_2+q_3y_2^2+q_4y_1+q_5y_2", ""),
    ("B2+", 1, 0, 1, "x1^2+q1*x1", "B^\\pm_2:F(x,q_1)=\\pm x^2+q_1x", ""),
    ("B2-", 1, 0, 1, "-x1^2+q1*x1", "B^\\pm_2:F(x,q_1)=\\pm x^2+q_1x", ""),
    ("B3+", 1, 0, 2, "x1^3+q1*x1^2+q2*x1", "B^\\pm_3:F(x,q_1,q_2)=\\pm x^3+q_1x^2+q_2x", ""),
    ("B3-", 1, 0, 2, "-x1^3+q1*x1^2+q2*x1", "B^\\pm_3:F(x,q_1,q_2)=\\pm x^3+q_1x^2+q_2x", ""),
    ("B4+", 1, 0, 3, "x1^4+q1*x1^3+q2*x1^2+q3*x1", "B^\\pm_4:F(x,q_1,q_2,q_3)=\\pm x^4+q_1x^3+q_2x^2+q_1x",
     "last term printed as q_1x; corrected to q_3x"),
    ("B4-", 1, 0, 3, "-x1^4+q1*x1^3+q2*x1^2+q3*x1", "B^\\pm_4:F(x,q_1,q_2,q_3)=\\pm x^4+q_1x^3+q_2x^2+q_1x",
     "last term printed as q_1x; corrected to q_3x"),
    ("C3+", 1, 1, 2, "x1*y1+y1^3+q1*y1^2+q2*y1", "C^\\pm_3:F(x,y,q_1,q_2)=\\pm xy+y^3+q_1y^2+q_2y", ""),
    ("C3-", 1, 1, 2, "-x1*y1+y1^3+q1*y1^2+q2*y1", "C^\\pm_3:F(x,y,q_1,q_2)=\\pm xy+y^3+q_1y^2+q_2y", ""),
    ("C4+", 1, 1, 3, "x1*y1+y1^4+q1*y1^3+q2*y1^2+q3*y1",
     "C^\\pm_4:F(x,y,q_1,q_2,q_3)=\\pm xy+y^4+q_1y^3+q_2y^2+q_3y", ""),
    ("C4-", 1, 1, 3, "x1*y1-y1^4+q1*y1^3+q2*y1^2+q3*y1",
     "C^\\pm_4:F(x,y,q_1,q_2,q_3)=\\pm xy+y^4+q_1y^3+q_2y^2+q_3y",
     "printed -xy+y^4 is equivalent to C4+ (y -> -y); the minus class is represented by xy-y^4"),
    ("F4+", 1, 1, 3, "x1^2+y1^3+q1*x1*y1+q2*x1+q3*y1",
     "F^\\pm_4:F(x,y,q_1,q_2,q_3)=\\pm x^2+y^3+q_1xy+q_2x+q_3y", ""),
    ("F4-", 1, 1, 3, "-x1^2+y1^3+q1*x1*y1+q2*x1+q3*y1",
     "F^\\pm_4:F(x,y,q_1,q_2,q_3)=\\pm x^2+y^3+q_1xy+q_2x+q_3y", ""),
]

_LEG = [
    ("A1", 0, 1, 0, "y1^2+z", "A_2:F(y_1,z)=y_1^2+z", "printed key A_2; the germ y^2 is A_1"),
    ("A2", 0, 1, 1, "y1^3+q1*y1+z", "A_2:F(y_1,q_1,z)=y_1^3+q_1y_1+z", ""),
    ("A3", 0, 1, 2, "y1^4+q1*y1^2+q2*y1+z", "A_3:F(y_1,q_1,q_2,z)= y_1^4+q_1y_1^2+q_2y_1+z", ""),
    ("A4", 0, 1, 3, "y1^5+q1*y1^3+q2*y1^2+q3*y1+z",
     "A_4:F(y_1,q_1,q_2,q_3)= y_1^5+q_1y_1^3+q_2y_1^2+q_3y_1+z", ""),
    ("A5", 0, 1, 4, "y1^6+q1*y1^4+q2*y1^3+q3*y1^2+q4*y1+z",
     "A_5:F(y_1,q_1,q_2,q_3,q_4)= y_1^6+q_1y_1^4+q_2y_1^3+q_3y_1^2+q_4y_1+z", ""),
    ("A6", 0, 1, 5, "y1^7+q1*y1^5+q2*y1^4+q3*y1^3+q4*y1^2+q5*y1+z",
     "A_6:F(y_1,q_1,q_2,q_3,q_4,q_5,z)= y_1^7+q_1y_1^5+q_2y_1^4+q_3y_1^3+q_4y_1^2+q_5y_1+z", ""),
    ("D4+", 0, 2, 3, "y1^2*y2+y2^3+q1*y2^2+q2*y2+q3*y1+z",
     "D^\\pm_4:F(y_1,y_2,q_1,q_2,q_3,z)= y_1^2y_2\\pm y_2^3+q_1y_2^2+q_2y_2+q_3y_1+z", ""),
    ("D4-", 0, 2, 3, "y1^2*y2-y2^3+q1*y2^2+q2*y2+q3*y1+z",
     "D^\\pm_4:F(y_1,y_2,q_1,q_2,q_3,z)= y_1^2y_2\\pm y_2^3+q_1y_2^2+q_2y_2+q_3y_1+z", ""),
    ("D5", 0, 2, 4, "y1^2*y2+y2^4+q1*y2^3+q2*y2^2+q3*y2+q4*y1+z",
     "D_5:F(y_1,y_2,q_1,q_2,q_3,q_4,z)= y_1^2y_2+ y_2^4+q_1y_2^3+q_2y_2^2+q_3y_2+q_4y_1+z", ""),
    ("D6+", 0, 2, 5, "y1^2*y2+y2^5+q1*y2^4+q2*y2^3+q3*y2^2+q4*y2+q5*y1+z",
     "D^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5,z)= y_1^2y_2\\pm  y_2^5+q_1y_2^4+q_2y_2^3+q_3y_2^2+q_4y_2+q_5y_1+z", ""),
    ("D6-", 0, 2, 5, "y1^2*y2-y2^5+q1*y2^4+q2*y2^3+q3*y2^2+q4*y2+q5*y1+z",
     "D^\\pm_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5,z)= y_1^2y_2\\pm  y_2^5+q_1y_2^4+q_2y_2^3+q_3y_2^2+q_4y_2+q_5y_1+z", ""),
    ("E6", 0, 2, 5, "y1^3+y2^4+q1*y1*y2^2+q2*y1*y2+q3*y2^2+q4*y1+q5*y2+z",
     "E_6:F(y_1,y_2,q_1,q_2,q_3,q_4,q_5,z)= y_1^3+ y_2^4+q_1y_1y_2^2+q_2y_1y_2+q_3y_2^2+q_4y_1+q_5y_2+z", ""),
    ("B2", 1, 0, 1, "x1^2+q1*x1+z", "B_2:F(x,q_1,z)= x^2+q_1x+z", ""),
    ("B3", 1, 0, 2, "x1^3+q1*x1^2+q2*x1+z", "B_3:F(x,q_1,q_2,z)=x^3+q_1x^2+q_2x+z", ""),
    ("B4", 1, 0, 3, "x1^4+q1*x1^3+q2*x1^2+q3*x1+z", "B_4:F(x,q_1,q_2,q_3,z)=x^4+q_1x^3+q_2x^2+q_1x+z",
     "last term printed as q_1x; corrected to q_3x"),
    ("C3e+", 1, 1, 2, "x1*y1+y1^3+q1*y1^2+q2*y1+z", "C^\\pm_3:F(x,y,q_1,q_2,z)=\\pm xy+y^3+q_1y^2+q_2y+z", ""),
    ("C3e-", 1, 1, 2, "-x1*y1+y1^3+q1*y1^2+q2*y1+z", "C^\\pm_3:F(x,y,q_1,q_2,z)=\\pm xy+y^3+q_1y^2+q_2y+z", ""),
    ("C4", 1, 1, 3, "x1*y1+y1^4+q1*y1^3+q2*y1^2+q3*y1+z",
     "C_4:F(x,y,q_1,q_2,q_3,z)=xy+y^4+q_1y^3+q_2y^2+q_3y+z", ""),
    ("F4", 1, 1, 3, "x1^2+y1^3+q1*x1*y1+q2*x1+q3*y1+z",
     "F_4:F(x,y,q_1,q_2,q_3,z)=x^2+y^3+q_1xy+q_2x+q_3y+z", ""),
]

_ALIASES = {LEGENDRIAN: {"C3+": "C3e+", "C3-": "C3e-"}}


def _kind(kind: str) -> str:
    k = kind.lower()
    if k.startswith("lag"):
        return LAGRANGIAN
    if k.startswith("leg"):
        return LEGENDRIAN
    raise ValueError(f"unknown kind {kind!r}")


@lru_cache(maxsize=None)
def _table(kind: str) -> dict:
    rows = _LAG if kind == LAGRANGIAN else _LEG
    out = {}
    for key, r, k, n, text, label, note in rows:
        params = _q(n) + (["z"] if kind == LEGENDRIAN else [])
        F = parse_poly(text, r, k, params)
        out[key] = CatalogEntry(key, kind, r, k, GeneratingFamily(F, kind), label, note)
    return out


def keys(kind: str = LAGRANGIAN) -> list:
    return list(_table(_kind(kind)))


def get(key: str, kind: str = LAGRANGIAN) -> CatalogEntry:
    kind = _kind(kind)
    table = _table(kind)
    key = _ALIASES.get(kind, {}).get(key, key)
    try:
        return table[key]
    except KeyError:
        raise KeyError(f"unknown {kind} catalog key {key!r}; known: {', '.join(table)}") from None


def list_entries(r: int | None = None, kind: str = LAGRANGIAN, n_max: int | None = None) -> list:
    """Entries with the given corner count and at most ``n_max`` parameters (``z`` not counted)."""
    kind = _kind(kind)
    if r is not None and r not in (0, 1):
        raise ValueError("the tables cover r = 0 and r = 1")
    return [e for e in _table(kind).values()
            if (r is None or e.r == r) and (n_max is None or e.n <= n_max)]
