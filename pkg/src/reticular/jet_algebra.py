"""Exact truncated polynomial arithmetic for germs on an r-corner.

A :class:`CornerPoly` is a polynomial with rational coefficients in the
corner variables ``x1..xr``, the internal variables ``y1..yk`` and an
ordered list of extra parameter names (``q1``, ``z``, ``u1``, ...).  The
corner constraint ``x >= 0`` plays no role here; it only matters for the
numerical geometry.

Coefficients are kept as ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise, which keeps integer-heavy
computations fast without ever leaving exact arithmetic.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from operator import add
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]
Monomial = tuple

__all__ = [
    "CornerPoly",
    "JetSpace",
    "GermSyntaxError",
    "parse_poly",
    "format_poly",
    "truncate",
    "derivative",
    "multiply",
    "substitute",
    "monomial_basis",
    "monomial_sort_key",
    "variable_names",
]


def _norm(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def variable_names(r: int, k: int, params: Sequence[str] = ()) -> tuple:
    return tuple([f"x{i + 1}" for i in range(r)] + [f"y{j + 1}" for j in range(k)] + list(params))


def monomial_sort_key(exps: Sequence[int]):
    """Graded-lex key: lower total degree first, then earlier variables first."""
    return (sum(exps), tuple(-e for e in exps))


class CornerPoly:
    """Polynomial germ in ``(x, y, params)`` with exact rational coefficients.

    Instances are immutable; all operations return new objects.
    """

    __slots__ = ("r", "k", "params", "_terms", "_names")

    def __init__(self, r: int, k: int, params: Sequence[str] = (), terms: Mapping | None = None):
        self.r = int(r)
        self.k = int(k)
        self.params = tuple(params)
        names = variable_names(self.r, self.k, self.params)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self._names = names
        n = len(names)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _norm(c)
            if c:
                clean[exps] = _norm(clean.get(exps, 0) + c)
                if not clean[exps]:
                    del clean[exps]
        self._terms = MappingProxyType(clean)

    @classmethod
    def _raw(cls, like: "CornerPoly", clean: dict) -> "CornerPoly":
        # trusted constructor: tuple exponents, normalized nonzero coefficients
        obj = object.__new__(cls)
        obj.r, obj.k, obj.params, obj._names = like.r, like.k, like.params, like._names
        obj._terms = MappingProxyType(clean)
        return obj

    # -- construction helpers -------------------------------------------------
    @classmethod
    def zero_like(cls, p: "CornerPoly") -> "CornerPoly":
        return cls(p.r, p.k, p.params)

    @classmethod
    def constant(cls, c, r: int, k: int, params: Sequence[str] = ()) -> "CornerPoly":
        n = r + k + len(params)
        return cls(r, k, params, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, name: str, r: int, k: int, params: Sequence[str] = ()) -> "CornerPoly":
        names = variable_names(r, k, params)
        if name not in names:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * len(names)
        e[names.index(name)] = 1
        return cls(r, k, params, {tuple(e): 1})

    def like(self, terms: Mapping) -> "CornerPoly":
        return CornerPoly(self.r, self.k, self.params, terms)

    def const(self, c) -> "CornerPoly":
        return CornerPoly.constant(c, self.r, self.k, self.params)

    def var(self, name: str) -> "CornerPoly":
        return CornerPoly.variable(name, self.r, self.k, self.params)

    # -- basic properties -----------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return self._terms

    @property
    def names(self) -> tuple:
        return self._names

    @property
    def nvars(self) -> int:
        return len(self._names)

    @property
    def ring(self) -> tuple:
        return (self.r, self.k, self.params)

    def index(self, var) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise KeyError(f"variable index {var} out of range")
            return var
        try:
            return self._names.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}; ring has {self._names}") from None

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a nonzero term; -1 for the zero polynomial."""
        return min((sum(e) for e in self._terms), default=-1)

    def coeff(self, exps: Sequence[int]) -> Coeff:
        return self._terms.get(tuple(exps), 0)

    def constant_term(self) -> Coeff:
        return self._terms.get((0,) * self.nvars, 0)

    def homogeneous_part(self, d: int) -> "CornerPoly":
        return self.like({e: c for e, c in self._terms.items() if sum(e) == d})

    def involves(self, var) -> bool:
        i = self.index(var)
        return any(e[i] for e in self._terms)

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: monomial_sort_key(t[0]))

    def evaluate(self, values: Mapping):
        """Exact evaluation; ``values`` maps every variable name to a number."""
        total = 0
        vals = [values[n] for n in self._names]
        for exps, c in self._terms.items():
            t = c
            for v, e in zip(vals, exps):
                if e:
                    t = t * v ** e
            total = total + t
        return total

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "CornerPoly":
        if isinstance(other, CornerPoly):
            if other.ring != self.ring:
                raise ValueError(f"incompatible rings {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return self.like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self.like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.like({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = self.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.const(other)
        if not isinstance(other, CornerPoly):
            return NotImplemented
        return self.ring == other.ring and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def __repr__(self):
        return f"CornerPoly({format_poly(self)!r}, r={self.r}, k={self.k}, params={list(self.params)})"

    def __str__(self):
        return format_poly(self)


# -- formatting ----------------------------------------------------------------
def _format_monomial(exps, names) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_coeff(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_poly(p: CornerPoly) -> str:
    """Canonical text: graded-lex order, lowest degree first."""
    if p.is_zero():
        return "0"
    out = []
    for exps, c in p.sorted_terms():
        mono = _format_monomial(exps, p.names)
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# -- parsing -------------------------------------------------------------------
class GermSyntaxError(ValueError):
    """Malformed germ text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text) and not text[pos:].isspace():
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise GermSyntaxError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, r, k, params):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = (r, k, tuple(params))
        self.names = variable_names(r, k, params)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise GermSyntaxError(msg, tok[2], self.text)

    def const(self, c):
        return CornerPoly.constant(c, *self.ring)

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.term()
            if tok[1] == "-":
                p = -p
        else:
            p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                p = p * self.factor()
            elif tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "("):
                self.fail("implicit multiplication is not allowed; use '*'")
            else:
                return p

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            etok = self.peek()
            if etok[0] == "op" and etok[1] == "-":
                self.fail("negative exponent", etok)
            if etok[0] != "num":
                self.fail("exponent must be a nonnegative integer", etok)
            self.take()
            base = base ** etok[1]
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    self.fail("rational coefficient must be integer/integer", den)
                if den[1] == 0:
                    self.fail("zero denominator", den)
                return self.const(Fraction(tok[1], den[1]))
            return self.const(tok[1])
        if tok[0] == "name":
            if tok[1] not in self.names:
                raise GermSyntaxError(
                    f"unknown variable {tok[1]!r} (known: {', '.join(self.names) or 'none'})",
                    tok[2], self.text)
            return CornerPoly.variable(tok[1], *self.ring)
        if tok[0] == "op" and tok[1] == "(":
            p = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                self.fail("expected ')'", close)
            return p
        self.fail("expected a number, variable or '('", tok)


def parse_poly(text: str, r: int = 0, k: int = 0, params: Sequence[str] = ()) -> CornerPoly:
    """Parse a germ expression such as ``"3/2*y1*q1 - y1^4"``.

    Raises :class:`GermSyntaxError` (carrying the offending position) on
    malformed input, unknown variables and negative exponents.
    """
    return _Parser(text, r, k, params).parse()


# -- public operations ---------------------------------------------------------
def truncate(p: CornerPoly, l: int) -> CornerPoly:
    """Drop every term of total degree > l."""
    if l < 0:
        raise ValueError("truncation degree must be >= 0")
    return p.like({e: c for e, c in p.terms.items() if sum(e) <= l})


def derivative(p: CornerPoly, var) -> CornerPoly:
    i = p.index(var)
    out = {}
    for exps, c in p.terms.items():
        e = exps[i]
        if e:
            ne = list(exps)
            ne[i] = e - 1
            out[tuple(ne)] = c * e
    return p.like(out)


def _integral(p: CornerPoly):
    """(common denominator, {exps: (integer numerator, degree)})."""
    den = 1
    for c in p.terms.values():
        if type(c) is Fraction:
            den = den * c.denominator // gcd(den, c.denominator)
    if den == 1:
        return 1, [(e, sum(e), c) for e, c in p.terms.items()]
    return den, [(e, sum(e), c.numerator * (den // c.denominator)) for e, c in p.terms.items()]


def multiply(a: CornerPoly, b: CornerPoly, l: int | None = None) -> CornerPoly:
    """Product of ``a`` and ``b`` with terms above degree ``l`` discarded."""
    if a.ring != b.ring:
        raise ValueError(f"incompatible rings {a.ring} and {b.ring}")
    da_, at = _integral(a)
    db_, bt = _integral(b)
    out: dict = {}
    get = out.get
    for ea, da, ca in at:
        if l is not None and da > l:
            continue
        for eb, db, cb in bt:
            if l is not None and da + db > l:
                continue
            e = tuple(map(add, ea, eb))
            out[e] = get(e, 0) + ca * cb
    den = da_ * db_
    if den == 1:
        clean = {e: c for e, c in out.items() if c}
    else:
        clean = {e: _norm(Fraction(c, den)) for e, c in out.items() if c}
    return CornerPoly._raw(a, clean)


def _power_table(p: CornerPoly, emax: int, l: int | None) -> list:
    table = [p.const(1)]
    for _ in range(emax):
        table.append(multiply(table[-1], p, l))
    return table


def substitute(p: CornerPoly, bindings: Mapping[str, CornerPoly], l: int | None = None) -> CornerPoly:
    """Compose ``p`` with the substitution ``var -> bindings[var]``.

    All images must live in one target ring.  Unbound variables are sent to
    the variable of the same name in the target ring.
    """
    images = {}
    target = None
    for name, img in bindings.items():
        p.index(name)
        if target is None:
            target = img.ring
        elif img.ring != target:
            raise ValueError("substituted polynomials must share one variable set")
        images[name] = img
    if target is None:
        return p if l is None else truncate(p, l)
    r, k, params = target
    tnames = variable_names(r, k, params)
    for name in p.names:
        if name not in images:
            if name not in tnames:
                raise ValueError(f"variable {name!r} is unbound and absent from the target ring")
            images[name] = CornerPoly.variable(name, r, k, params)

    emax = [max((e[i] for e in p.terms), default=0) for i in range(p.nvars)]
    tables = [_power_table(images[n], emax[i], l) for i, n in enumerate(p.names)]
    out: dict = {}
    zero = CornerPoly(r, k, params)
    for exps, c in p.terms.items():
        t = zero.const(c)
        for i, e in enumerate(exps):
            if e:
                t = multiply(t, tables[i][e], l)
                if t.is_zero():
                    break
        for e, cc in t.terms.items():
            out[e] = out.get(e, 0) + cc
    return CornerPoly(r, k, params, out)


class JetSpace:
    """Monomials of total degree ``min_degree..l`` in ``nvars`` variables, graded-lex ordered."""

    def __init__(self, nvars: int, l: int, min_degree: int = 0, names: Sequence[str] | None = None):
        if not 0 <= min_degree <= l:
            raise ValueError("need 0 <= min_degree <= l")
        self.nvars = nvars
        self.l = l
        self.min_degree = min_degree
        basis = []
        for d in range(min_degree, l + 1):
            basis.extend(_monomials_of_degree(nvars, d))
        self.basis = tuple(basis)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.names = tuple(names) if names is not None else tuple(f"v{i + 1}" for i in range(nvars))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, p: CornerPoly) -> dict:
        """Sparse coordinates of the jet of ``p`` (terms outside the space are dropped)."""
        idx = self.index
        return {idx[e]: c for e, c in p.terms.items() if e in idx}

    def monomial_str(self, i: int) -> str:
        return _format_monomial(self.basis[i], self.names) or "1"

    def __repr__(self):
        return f"JetSpace(nvars={self.nvars}, l={self.l}, min_degree={self.min_degree}, dim={self.dim})"


def _monomials_of_degree(n: int, d: int) -> list:
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=monomial_sort_key)
    return out


def monomial_basis(r: int, k: int, l: int, min_degree: int = 0) -> JetSpace:
    return JetSpace(r + k, l, min_degree, variable_names(r, k))


def monomials_up_to(n: int, l: int, min_degree: int = 0) -> Iterable[tuple]:
    for d in range(min_degree, l + 1):
        yield from _monomials_of_degree(n, d)
