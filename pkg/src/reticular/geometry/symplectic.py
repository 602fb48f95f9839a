"""Exact symplectic and contact algebra: non-degeneracy, vector fields,
generating families from generating functions and the module criterion
for stability of a map germ.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..jet_algebra import CornerPoly, JetSpace, derivative, monomials_up_to, multiply, substitute, truncate
from ..linalg import EchelonBasis, matrix_rank
from ..unfoldings import LAGRANGIAN, LEGENDRIAN, GeneratingFamily

__all__ = [
    "check_S_nondegenerate",
    "check_C_nondegenerate",
    "VectorField",
    "hamiltonian_vf",
    "contact_hamiltonian_vf",
    "symplectic_lie_derivative",
    "contact_form_value",
    "phase_space_names",
    "family_from_generating_function",
    "MapGermSpec",
    "generating_function",
    "stability_criterion_check",
]


def _at0(p: CornerPoly):
    return p.constant_term()


def _second(F: CornerPoly, a: str, b: str):
    return _at0(derivative(derivative(F, a), b))


def _xy_names(F: CornerPoly):
    return F.names[:F.r], F.names[F.r:F.r + F.k]


def check_S_nondegenerate(family: GeneratingFamily) -> bool:
    """Rank of ``[[F_xy, F_xq], [F_yy, F_yq]]`` at 0 equals ``r + k``."""
    if family.kind != LAGRANGIAN:
        return False
    F = family.F
    xs, ys = _xy_names(F)
    cols = list(ys) + list(family.unfolding_params)
    rows = [[_second(F, a, b) for b in cols] for a in list(xs) + list(ys)]
    if not rows:
        return True
    return matrix_rank(rows) == F.r + F.k


def check_C_nondegenerate(family: GeneratingFamily) -> bool:
    """First derivatives in x, y vanish at 0 and the bordered matrix has rank ``r + k + 1``."""
    if family.kind != LEGENDRIAN:
        return False
    F = family.F
    xs, ys = _xy_names(F)
    if any(_at0(derivative(F, v)) for v in list(xs) + list(ys)):
        return False
    cols = list(ys) + list(family.unfolding_params) + ["z"]
    rows = [[_at0(derivative(F, b)) for b in cols]]
    rows += [[_second(F, a, b) for b in cols] for a in list(xs) + list(ys)]
    return matrix_rank(rows) == F.r + F.k + 1


# -- vector fields -----------------------------------------------------------
def phase_space_names(n: int, contact: bool = False, upper: bool = False) -> tuple:
    q, p, z = ("Q", "P", "Z") if upper else ("q", "p", "z")
    names = [f"{q}{i + 1}" for i in range(n)]
    if contact:
        names.append(z)
    return tuple(names + [f"{p}{i + 1}" for i in range(n)])


@dataclass(frozen=True)
class VectorField:
    """Components indexed by coordinate name; all in the ring of ``f``."""

    names: tuple
    components: tuple

    def __getitem__(self, name):
        return self.components[self.names.index(name)]

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.components))

    def __str__(self):
        parts = [f"({c})*d/d{n}" for n, c in zip(self.names, self.components) if not c.is_zero()]
        return " + ".join(parts) or "0"


def _n_from(f: CornerPoly, contact: bool) -> int:
    n = sum(1 for p in f.params if p.startswith("q"))
    expected = phase_space_names(n, contact)
    if n == 0 or f.r or f.k or tuple(f.params) != expected:
        raise ValueError(f"expected phase-space variables {expected}, got {f.params}")
    return n


def hamiltonian_vf(f: CornerPoly) -> VectorField:
    """``X_f = sum(df/dp_j d/dq_j - df/dq_j d/dp_j)``; ``f`` lives in params ``(q.., p..)``."""
    n = _n_from(f, False)
    comps = [derivative(f, f"p{j + 1}") for j in range(n)]
    comps += [-derivative(f, f"q{j + 1}") for j in range(n)]
    return VectorField(f.params, tuple(comps))


def contact_hamiltonian_vf(f: CornerPoly) -> VectorField:
    """Contact Hamiltonian field of ``f(q, z, p)`` for the form ``dz - sum p dq``."""
    n = _n_from(f, True)
    fz = derivative(f, "z")
    qs = [-derivative(f, f"p{j + 1}") for j in range(n)]
    ps = [derivative(f, f"q{j + 1}") + f.var(f"p{j + 1}") * fz for j in range(n)]
    zc = f - sum((f.var(f"p{j + 1}") * derivative(f, f"p{j + 1}") for j in range(n)), f.const(0))
    return VectorField(f.params, tuple(qs + [zc] + ps))


def symplectic_lie_derivative(X: VectorField) -> list:
    """Coefficient matrix of ``L_X(sum dp_j ^ dq_j)``; all zero iff X is symplectic.

    With constant coefficients ``w`` the Lie derivative is
    ``(L_X w)_ab = sum_c (w_cb dX^c/dw_a + w_ac dX^c/dw_b)``.
    """
    names = X.names
    N = len(names)
    n = N // 2
    w = [[0] * N for _ in range(N)]
    for j in range(n):
        # dp_j ^ dq_j: coefficient +1 at (p_j, q_j), -1 at (q_j, p_j)
        w[n + j][j] = 1
        w[j][n + j] = -1
    d = [[derivative(X.components[c], names[a]) for a in range(N)] for c in range(N)]
    zero = X.components[0].const(0)
    out = []
    for a in range(N):
        row = []
        for b in range(N):
            t = zero
            for c in range(N):
                if w[c][b]:
                    t = t + d[c][a] * w[c][b]
                if w[a][c]:
                    t = t + d[c][b] * w[a][c]
            row.append(t)
        out.append(row)
    return out


def contact_form_value(X: VectorField) -> CornerPoly:
    """``theta(X)`` for ``theta = dz - sum p_j dq_j``."""
    n = (len(X.names) - 1) // 2
    val = X["z"]
    for j in range(n):
        val = val - X[f"q{j + 1}"] * X.components[0].var(f"p{j + 1}")
    return val


# -- generating families from generating functions ---------------------------
def family_from_generating_function(H: CornerPoly, r: int, n: int, kind: str = LAGRANGIAN) -> GeneratingFamily:
    """``F = H(x_1..x_r, 0.., y) + <y, q>`` (with ``-z`` appended for Legendrian).

    ``H`` is a polynomial in the parameters ``Q1..Qn, p1..pn``.
    """
    if r > n:
        raise ValueError("need r <= n")
    expected = tuple([f"Q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)])
    if tuple(H.params) != expected or H.r or H.k:
        raise ValueError(f"H must be a polynomial in {expected}")
    legendrian = kind.lower().startswith("leg")
    params = tuple(f"q{j + 1}" for j in range(n)) + (("z",) if legendrian else ())
    zero = CornerPoly(r, n, params)
    bind = {}
    for i in range(n):
        bind[f"Q{i + 1}"] = zero.var(f"x{i + 1}") if i < r else zero.const(0)
        bind[f"p{i + 1}"] = zero.var(f"y{i + 1}")
    F = substitute(H, bind)
    for j in range(n):
        F = F + zero.var(f"y{j + 1}") * zero.var(f"q{j + 1}")
    if legendrian:
        F = F - zero.var("z")
    return GeneratingFamily(F, LEGENDRIAN if legendrian else LAGRANGIAN)


# -- map germs -----------------------------------------------------------------
@dataclass
class MapGermSpec:
    """A symplectic map germ ``S(Q, P) = (q, p)`` or contact ``C(Q, Z, P) = (q, z, p)``.

    ``components`` maps ``q1..qn, p1..pn`` (and ``z``) to polynomials in the
    source parameters ``Q1..Qn, P1..Pn`` (with ``Z``).  The structure is
    checked exactly up to degree ``l`` at construction.
    """

    kind: str
    n: int
    components: dict
    r: int = 0
    l: int | None = None
    conformal_factor: CornerPoly | None = field(default=None, repr=False)

    def __post_init__(self):
        self.kind = self.kind.lower()
        if self.kind not in ("symplectic", "contact"):
            raise ValueError("kind must be 'symplectic' or 'contact'")
        if not 0 <= self.r <= self.n:
            raise ValueError("need 0 <= r <= n")
        if self.l is None:
            self.l = self.n + 2
        contact = self.kind == "contact"
        src = phase_space_names(self.n, contact, upper=True)
        tgt = phase_space_names(self.n, contact)
        if set(self.components) != set(tgt):
            raise ValueError(f"components must be exactly {tgt}")
        for name, c in self.components.items():
            if tuple(c.params) != src or c.r or c.k:
                raise ValueError(f"component {name} must be a polynomial in {src}")
            if c.constant_term():
                raise ValueError(f"component {name} does not vanish at 0")
        if contact:
            self._check_contact()
        else:
            self._check_symplectic()

    @property
    def source_names(self) -> tuple:
        return phase_space_names(self.n, self.kind == "contact", upper=True)

    def _check_symplectic(self):
        n, src, l = self.n, self.source_names, self.l
        d = {name: [truncate(derivative(c, s), l - 1) for s in src] for name, c in self.components.items()}
        N = len(src)
        for a in range(N):
            for b in range(a + 1, N):
                val = self.components["q1"].const(0)
                for j in range(n):
                    dp, dq = d[f"p{j + 1}"], d[f"q{j + 1}"]
                    val = val + multiply(dp[a], dq[b], l - 1) - multiply(dp[b], dq[a], l - 1)
                want = 0
                if a < n and b == a + n:
                    want = -1   # dP_a ^ dQ_a read at (Q_a, P_a)
                if not (val - want).is_zero():
                    raise ValueError("map germ is not symplectic up to the checked order")

    def _check_contact(self):
        n, src, l = self.n, self.source_names, self.l
        comp = self.components
        zero = comp["z"].const(0)
        theta = []
        for s in src:
            t = derivative(comp["z"], s)
            for j in range(n):
                t = t - multiply(comp[f"p{j + 1}"], derivative(comp[f"q{j + 1}"], s), l - 1)
            theta.append(truncate(t, l - 1))
        g = theta[n]
        if not g.constant_term():
            raise ValueError("conformal factor vanishes at 0; not a contact germ")
        for i in range(n):
            want = multiply(g, zero.var(f"P{i + 1}"), l - 1) * -1
            if not (theta[i] - want).is_zero() or not theta[n + 1 + i].is_zero():
                raise ValueError("map germ is not contact up to the checked order")
        self.conformal_factor = g


def generating_function(S: MapGermSpec, l: int | None = None) -> CornerPoly:
    """``H(Q, p)`` with ``P = -dH/dQ`` and ``q = -dH/dp`` for a symplectic germ.

    When ``p`` cannot be solved for ``P`` the germ is first composed with
    the fibre-preserving shear ``p -> p + c q``; this does not change the
    Lagrangian equivalence class of the associated map.
    """
    if S.kind != "symplectic":
        raise ValueError("generating functions are built for symplectic germs")
    n = S.n
    l = l or S.l + 1
    src = S.source_names
    comps = dict(S.components)

    def lin(c, var):
        return Fraction(c.coeff(tuple(int(v == var) for v in src)))

    for shear in range(0, 6):
        p_new = {f"p{j + 1}": comps[f"p{j + 1}"] + comps[f"q{j + 1}"] * shear for j in range(n)}
        D = [[lin(p_new[f"p{j + 1}"], f"P{i + 1}") for i in range(n)] for j in range(n)]
        if matrix_rank(D) == n:
            break
    else:
        raise ValueError("could not find a shear making p transverse to P")
    Dinv = _inverse(D)
    # target ring: (Q, p)
    mixed = tuple([f"Q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)])
    ring0 = CornerPoly(0, 0, mixed)
    Qv = {f"Q{i + 1}": ring0.var(f"Q{i + 1}") for i in range(n)}
    pv = [ring0.var(f"p{j + 1}") for j in range(n)]
    # solve p_j = p_new_j(Q, P) for P by fixed point P = D^{-1}(p - rest(Q, P))
    rests = []
    for j in range(n):
        pj = p_new[f"p{j + 1}"]
        lin_part = pj.like({e: c for e, c in pj.terms.items()
                            if sum(e) == 1 and any(e[n + i] for i in range(n))})
        rests.append(pj - lin_part)
    P = [ring0.const(0) for _ in range(n)]
    for _ in range(l + 2):
        bind = dict(Qv)
        bind.update({f"P{i + 1}": P[i] for i in range(n)})
        rv = [substitute(rests[j], bind, l) for j in range(n)]
        newP = []
        for i in range(n):
            t = ring0.const(0)
            for j in range(n):
                if Dinv[i][j]:
                    t = t + (pv[j] - rv[j]) * Dinv[i][j]
            newP.append(truncate(t, l))
        if newP == P:
            break
        P = newP
    bind = dict(Qv)
    bind.update({f"P{i + 1}": P[i] for i in range(n)})
    q = [substitute(comps[f"q{j + 1}"], bind, l) for j in range(n)]
    # H = -integral(P dQ + q dp) by the radial homotopy formula
    coeffs = [(f"Q{i + 1}", P[i]) for i in range(n)] + [(f"p{j + 1}", q[j]) for j in range(n)]
    H = {}
    for var, a in coeffs:
        vi = mixed.index(var)
        for e, c in a.terms.items():
            ne = list(e)
            ne[vi] += 1
            key = tuple(ne)
            H[key] = H.get(key, 0) - Fraction(c) / (sum(e) + 1)
    return truncate(ring0.like(H), l)


def _inverse(M):
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def stability_criterion_check(M: MapGermSpec, l: int) -> bool:
    """Truncated module criterion for stability of the germ ``pi o S``.

    Works in ``J^{l+1}`` of source functions modulo ``B + M^{l+2}`` with
    ``B = <Q_i P_i (i <= r), Q_j (j > r)>`` (plus ``Z`` in the contact case)
    and asks whether the pullbacks ``m(q o S) * {1, p_i o S}`` (``m`` a
    monomial in ``q`` and, for contact germs, ``z``) span everything.
    """
    n, r = M.n, M.r
    contact = M.kind == "contact"
    need = n + 2 if contact else n + 1
    if l < need:
        raise ValueError(f"criterion needs l >= {need}")
    src = M.source_names
    top = l + 1
    space = JetSpace(len(src), top, 0, src)
    zero = M.components["q1"].const(0)
    V = lambda name: zero.var(name)
    B = [multiply(V(f"Q{i + 1}"), V(f"P{i + 1}")) for i in range(r)]
    B += [V(f"Q{j + 1}") for j in range(r, n)]
    if contact:
        B.append(V("Z"))
    eb = EchelonBasis(space.dim)
    for g in B:
        for m in monomials_up_to(len(src), top - g.order()):
            eb.add(space.vector(multiply(zero.like({m: 1}), g, top)))
    base_maps = [truncate(M.components[f"q{j + 1}"], top) for j in range(n)]
    if contact:
        base_maps.append(truncate(M.components["z"], top))
    mults = [zero.const(1)] + [truncate(M.components[f"p{i + 1}"], top) for i in range(n)]
    for m in monomials_up_to(len(base_maps), top):
        pulled = zero.const(1)
        for g, e in zip(base_maps, m):
            for _ in range(e):
                pulled = multiply(pulled, g, top)
        if pulled.is_zero():
            continue
        for h in mults:
            eb.add(space.vector(multiply(pulled, h, top)))
    return eb.rank == space.dim
