import random

import pytest
from hypothesis import given, settings, strategies as st

from reticular import catalog
from reticular.jet_algebra import parse_poly, substitute
from reticular.local_algebra import (
    INFINITE,
    IndeterminateError,
    codimension,
    determinacy_bound,
    membership,
    tangent_module,
)
from oracles import tangent_quotient_dim


def P(text, r=1, k=1):
    return parse_poly(text, r, k)


class TestTangentModule:
    def test_x_squared(self):
        T = tangent_module(P("x1^2", 1, 0), "R", 3)
        assert T.rank == 2
        assert T.contains(P("x1^2", 1, 0)) and T.contains(P("x1^3", 1, 0))
        assert not T.contains(P("x1", 1, 0))

    def test_c3_reduction(self):
        T = tangent_module(P("x1*y1 + y1^3"), "R", 3)
        # x is congruent to -3y^2, and y^3, xy, x^2 vanish in the quotient
        for g in ("x1 + 3*y1^2", "y1^3", "x1*y1", "x1^2"):
            assert T.contains(P(g)), g
        for g in ("y1", "x1", "y1^2"):
            assert not T.contains(P(g)), g

    def test_k_morse(self):
        T = tangent_module(P("y1^2", 0, 1), "K", 2)
        assert T.certified
        assert [T.space.basis[c] for c in T.quotient_columns()] == [(0,)]

    def test_rejects_constant(self):
        with pytest.raises(ValueError):
            tangent_module(P("1 + y1^2", 0, 1), "R", 3)

    def test_rejects_linear_in_r_mode(self):
        with pytest.raises(ValueError):
            tangent_module(P("y1", 0, 1), "R", 3)
        assert tangent_module(P("y1", 0, 1), "K", 3).certified


class TestCodimension:
    @pytest.mark.parametrize("text", ["x1^2", "-x1^2"])
    def test_b2(self, text):
        rep = codimension(P(text, 1, 0), "Rplus")
        assert rep.codim == 1 and rep.basis == ["x1"]

    def test_morse(self):
        assert codimension(P("y1^2", 0, 1), "Rplus").codim == 0

    @pytest.mark.parametrize("text", ["x1^2 + y1^3", "-x1^2 + y1^3"])
    def test_f4(self, text):
        rep = codimension(P(text), "Rplus")
        assert rep.codim == 3
        assert set(rep.basis) == {"y1", "x1", "x1*y1"}

    def test_c3_k(self):
        rep = codimension(P("x1*y1 + y1^3"), "K")
        assert rep.codim == 3 and set(rep.basis) == {"1", "y1", "y1^2"}

    def test_infinite(self):
        rep = codimension(P("x1*y1"), "Rplus")
        assert rep.codim == INFINITE and not rep.stabilized

    def test_report_json(self):
        import json

        d = json.loads(codimension(P("y1^4", 0, 1)).to_json())
        assert d == {"mode": "Rplus", "codim": 2, "basis": ["y1", "y1^2"], "l_used": d["l_used"], "stabilized": True}

    @pytest.mark.parametrize("l", range(2, 7))
    def test_x_power(self, l):
        f = P(f"x1^{l}", 1, 0)
        assert codimension(f, "Rplus").codim == l - 1
        assert determinacy_bound(f, "R") == l


class TestDeterminacy:
    def test_table(self):
        assert determinacy_bound(P("x1^3", 1, 0), "R") == 3
        assert determinacy_bound(P("y1^2", 0, 1), "R") == 2
        assert determinacy_bound(P("x1^2 + y1^3"), "K") == 3

    def test_fail(self):
        assert determinacy_bound(P("x1*y1"), "R", l_max=5) == "FAIL"


class TestMembership:
    def test_examples(self):
        y = P("y1", 0, 1)
        T = tangent_module(P("y1^3", 0, 1), "R", 4)
        assert membership(y, T, [y.const(1), y])
        assert not membership(y, T, [y.const(1)])
        T2 = tangent_module(P("x1^2", 1, 0), "R", 4)
        assert membership(P("x1^2", 1, 0), T2)

    def test_uncertified_raises(self):
        T = tangent_module(P("y1^4", 0, 1), "R", 2)
        assert not T.certified
        y = P("y1", 0, 1)
        assert not membership(y, T)
        with pytest.raises(IndeterminateError):
            membership(y, T, [y])


# quotient dimensions from an independent Groebner-basis computation, frozen
ORACLE_DIMS = {
    ("A2", "Rplus"): 2, ("A3+", "Rplus"): 3, ("A4", "Rplus"): 4, ("A5+", "Rplus"): 5, ("A6", "Rplus"): 6,
    ("D4+", "Rplus"): 4, ("D5+", "Rplus"): 5, ("D6-", "Rplus"): 6, ("E6+", "Rplus"): 6,
    ("B2+", "Rplus"): 2, ("B4-", "Rplus"): 4, ("C3+", "Rplus"): 3, ("C4-", "Rplus"): 4, ("F4+", "Rplus"): 4,
}


@pytest.mark.parametrize("key, mode", sorted(ORACLE_DIMS))
def test_quotient_dim_matches_frozen_oracle(key, mode):
    germ = catalog.get(key).germ
    assert codimension(germ, mode).codim + 1 == ORACLE_DIMS[key, mode]


@pytest.mark.parametrize("key, mode", sorted(ORACLE_DIMS))
def test_frozen_oracle_reproducible(key, mode):
    assert tangent_quotient_dim(catalog.get(key).germ, "R") == ORACLE_DIMS[key, mode]


@pytest.mark.parametrize("key", catalog.keys("Legendrian"))
def test_k_codim_against_groebner(key):
    germ = catalog.get(key, "Legendrian").germ
    assert codimension(germ, "K").codim == tangent_quotient_dim(germ, "K")


GERMS = [("y1^4", 0, 1), ("y1^2*y2 + y2^3", 0, 2), ("x1^2 + y1^3", 1, 1), ("x1*y1 + y1^4", 1, 1),
         ("x1^3", 1, 0), ("y1^3 - y1*y2^2", 0, 2), ("y1^3 + y2^4", 0, 2)]


def _linear_change(f, seed):
    rng = random.Random(seed)
    zero = f.const(0)
    k = f.k
    while True:
        A = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)]
        from reticular.linalg import matrix_rank

        if matrix_rank(A) == k:
            break
    bind = {}
    for i in range(f.r):
        bind[f"x{i + 1}"] = zero.var(f"x{i + 1}") * rng.randint(1, 4)
    for j in range(k):
        lin = zero
        for c in range(k):
            lin = lin + zero.var(f"y{c + 1}") * A[j][c]
        bind[f"y{j + 1}"] = lin
    return substitute(f, bind)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(GERMS), st.integers(0, 10 ** 6), st.sampled_from(["Rplus", "K"]))
def test_codim_linear_invariance(g, seed, mode):
    f = parse_poly(*g)
    assert codimension(_linear_change(f, seed), mode).codim == codimension(f, mode).codim


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(GERMS), st.data())
def test_determinacy_perturbation(g, data):
    f = parse_poly(*g)
    d = determinacy_bound(f, "R")
    exps = data.draw(st.lists(st.integers(0, d + 1), min_size=f.nvars, max_size=f.nvars)
                     .filter(lambda e: sum(e) == d + 1) | st.just(None))
    if exps is None:
        exps = [0] * (f.nvars - 1) + [d + 1]
    c = data.draw(st.sampled_from([-2, -1, 1, 3]))
    assert codimension(f + f.like({tuple(exps): c}), "Rplus").codim == codimension(f, "Rplus").codim


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(GERMS), st.integers(2, 5), st.sampled_from(["R", "K"]))
def test_rank_nullity(g, l, mode):
    f = parse_poly(*g)
    T = tangent_module(f, mode, l)
    assert len(T.quotient_columns()) == T.space.dim - T.rank
