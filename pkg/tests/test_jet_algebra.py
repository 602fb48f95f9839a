from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reticular.jet_algebra import (
    CornerPoly,
    GermSyntaxError,
    derivative,
    format_poly,
    monomial_basis,
    multiply,
    parse_poly,
    substitute,
    truncate,
)
from strategies import polys


def P(text, r=1, k=1, params=()):
    return parse_poly(text, r, k, params)


class TestParse:
    def test_f4_base(self):
        f = P("x1^2 + y1^3")
        assert dict(f.terms) == {(2, 0): 1, (0, 3): 1}

    def test_zero(self):
        f = P("0", 0, 1)
        assert f.is_zero() and dict(f.terms) == {}

    def test_rational_with_param(self):
        f = P("3/2*y1*q1 - y1^4", 0, 1, ["q1"])
        assert f.coeff((1, 1)) == Fraction(3, 2)
        assert f.coeff((4, 0)) == -1
        assert format_poly(f) == "3/2*y1*q1 - y1^4"

    @pytest.mark.parametrize("text, pos", [("x1 + ", 5), ("x1 y1", 3), ("x1^-2", 3), ("2*w1", 2), ("(x1", 3)])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(GermSyntaxError) as ei:
            P(text)
        assert ei.value.pos == pos

    def test_unknown_variable(self):
        with pytest.raises(GermSyntaxError, match="unknown variable"):
            P("y2", 0, 1)

    def test_parentheses_and_powers(self):
        assert P("(x1+y1)^2") == P("x1^2 + 2*x1*y1 + y1^2")

    def test_no_zero_coefficients_stored(self):
        assert P("x1 - x1 + y1^2").terms == {(0, 2): 1}


class TestOps:
    def test_truncate(self):
        assert truncate(P("x1^2 + x1^5", 1, 0), 3) == P("x1^2", 1, 0)
        f = P("y1^3 + q1*y1", 0, 1, ["q1"])
        assert truncate(f, 4) == f
        g = P("7 + x1 + y1^2 + x1^6", 1, 1)
        assert truncate(g, 0) == P("7", 1, 1)

    def test_derivative(self):
        f = P("y1^3 + q1*y1", 0, 1, ["q1"])
        assert derivative(f, "y1") == P("3*y1^2 + q1", 0, 1, ["q1"])
        assert derivative(P("x1^2", 1, 0), "x1") == P("2*x1", 1, 0)
        assert derivative(P("x1*y1 + y1^3"), "y1") == P("x1 + 3*y1^2")
        with pytest.raises(KeyError):
            derivative(P("x1"), "q1")

    def test_multiply(self):
        x = P("x1", 1, 0)
        assert multiply(x, P("x1^2", 1, 0), 10) == P("x1^3", 1, 0)
        assert multiply(x, P("x1^2", 1, 0), 2).is_zero()
        assert multiply(P("1+y1", 0, 1), P("1-y1", 0, 1), 2) == P("1 - y1^2", 0, 1)
        with pytest.raises(ValueError):
            multiply(P("x1", 1, 0), P("y1", 0, 1))

    def test_substitute(self):
        f = P("y1^3 + q1*y1", 0, 1, ["q1"])
        zero = f.const(0)
        assert substitute(f, {"q1": zero}, 5) == P("y1^3", 0, 1, ["q1"])
        g = P("x1^2", 1, 0)
        assert substitute(g, {"x1": P("x1 + x1^2", 1, 0)}, 3) == P("x1^2 + 2*x1^3", 1, 0)
        H = P("-Q1*p1 + p1^3", 0, 0, ["Q1", "p1"])
        assert substitute(H, {"Q1": H.const(0)}, 5) == P("p1^3", 0, 0, ["Q1", "p1"])

    def test_monomial_basis(self):
        s = monomial_basis(1, 0, 3, 1)
        assert s.dim == 3 and s.basis == ((1,), (2,), (3,))
        s = monomial_basis(1, 1, 2, 0)
        assert [s.monomial_str(i) for i in range(s.dim)] == ["1", "x1", "y1", "x1^2", "x1*y1", "y1^2"]
        s = monomial_basis(0, 2, 1, 1)
        assert s.dim == 2
        assert all(s.index[m] == i for i, m in enumerate(s.basis))

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            CornerPoly(0, 1, (), {(1,): 0.5})


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(0, 6), st.integers(0, 6))
def test_truncate_composes(p, l, m):
    assert truncate(truncate(p, l), m) == truncate(p, min(l, m))


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.sampled_from(["x1", "y1"]))
def test_leibniz(a, b, v):
    l = max(a.degree(), 0) + max(b.degree(), 0)
    lhs = derivative(multiply(a, b, l), v)
    rhs = multiply(derivative(a, v), b, l) + multiply(a, derivative(b, v), l)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys(params=("q1",)))
def test_identity_substitution(p):
    ident = {n: p.var(n) for n in p.names}
    assert substitute(p, ident) == p


@settings(max_examples=60, deadline=None)
@given(polys(params=("q1",)))
def test_format_round_trip(p):
    assert parse_poly(format_poly(p), p.r, p.k, p.params) == p


@settings(max_examples=40, deadline=None)
@given(polys())
def test_coefficients_exact(p):
    assert all(isinstance(c, (int, Fraction)) and c != 0 for c in p.terms.values())
