import numpy as np
import pytest
import sympy as sp
from hypothesis import HealthCheck, given, settings, strategies as st

from reticular import catalog
from reticular.geometry import (
    DiscriminantMesh,
    SolverConfig,
    caustic,
    export_mesh,
    load_config,
    stratum_label,
    wavefront,
)
from reticular.jet_algebra import parse_poly
from reticular.unfoldings import LAGRANGIAN, LEGENDRIAN, GeneratingFamily
from helpers import hausdorff_to_curve
from oracles import to_sympy


def fam(text, r, k, params, kind=LAGRANGIAN):
    return GeneratingFamily(parse_poly(text, r, k, params), kind)


A3 = fam("y1^4 + q1*y1^2 + q2*y1", 0, 1, ["q1", "q2"])


def _sigma(label):
    parts = label.split("_")[1:]
    return [tuple(int(c) - 1 for c in p) if p != "empty" else () for p in parts]


def independent_residuals(family, mesh):
    """Re-evaluate every defining equation at the witnesses with sympy, one stratum at a time."""
    F, syms = to_sympy(family.F)
    name = {str(s): s for s in syms}
    xs = [name[f"x{i + 1}"] for i in range(family.r)]
    ys = [name[f"y{j + 1}"] for j in range(family.k)]
    labels = np.array(mesh.strata)
    out = []
    for lab in mesh.labels:
        rows = mesh.witnesses[labels == lab]
        n = len(rows)
        cols = {name[w]: rows[:, i] for i, w in enumerate(mesh.witness_names)}
        args = [cols.get(s, np.zeros(n)) for s in syms]
        ev = lambda e: np.abs(np.broadcast_to(sp.lambdify(syms, e, "numpy")(*args), (n,)))
        kind, sigmas = lab[0], _sigma(lab)
        sigma = sigmas[0]
        zero = [xs[i] for i in (sigmas[-1] if kind == "Q" else sigma)]
        free = [x for x in xs if xs.index(x) not in sigma] + ys
        eqs = [sp.diff(F, v) for v in free] + ([F] if kind == "W" else []) + zero
        resid = np.max([ev(e) for e in eqs], axis=0) if eqs else np.zeros(n)
        open_x = [x for x in xs if x not in zero]
        corner = np.min([cols[x] for x in open_x], axis=0) if open_x else np.zeros(n)
        det = None
        if kind == "C":
            det = ev(sp.Matrix([[sp.diff(F, a, b) for b in free] for a in free]).det())
        out.append((lab, resid, corner, det))
    return out


class TestCaustic:
    def test_a3_cusp(self):
        m = caustic(A3, [(-1, 1), (-1, 1)], res=80)
        assert m.labels == ["C_empty"]
        t = np.linspace(-0.63, 0.63, 400001)
        curve = np.c_[-6 * t ** 2, 8 * t ** 3]
        curve = curve[(np.abs(curve) <= 1).all(axis=1)]
        a, b = hausdorff_to_curve(m.points, curve)
        assert a < 1e-3 and b < 1e-3

    def test_b2_is_q1_zero(self):
        m = caustic(fam("x1^2 + q1*x1", 1, 0, ["q1"]), [(-1, 1)], res=50)
        assert m.labels == ["Q_empty_1"]
        assert np.abs(m.points).max() < 1e-6

    def test_a1_empty(self):
        m = caustic(fam("y1^2 + q1*y1", 0, 1, ["q1"]), [(-1, 1)], res=50)
        assert len(m) == 0 and m.labels == []

    def test_wrong_kind(self):
        with pytest.raises(ValueError):
            caustic(fam("y1^3 + q1*y1 + z", 0, 1, ["q1", "z"], LEGENDRIAN), [(-1, 1)] * 2)

    @pytest.mark.parametrize("region, res", [([(1, -1), (-1, 1)], 20), ([(-1, 1)] * 3, 20), ([(-1, 1)] * 2, 1)])
    def test_bad_region(self, region, res):
        with pytest.raises(ValueError):
            caustic(A3, region, res=res)

    def test_deterministic(self):
        m1 = caustic(A3, [(-1, 1)], res=40)
        m2 = caustic(A3, [(-1, 1)], res=40)
        assert np.array_equal(m1.points, m2.points) and m1.strata == m2.strata

    def test_stable_equivalence_invariance(self):
        base = caustic(A3, [(-1, 1)], res=60)
        plus = caustic(fam("y1^4 + q1*y1^2 + q2*y1 - y2^2", 0, 2, ["q1", "q2"]), [(-1, 1)], res=60)
        a, b = hausdorff_to_curve(plus.points, base.points)
        assert a < 2e-3 and b < 2e-3


LAG_SMALL = [e.key for e in catalog.list_entries(kind="Lagrangian") if e.n <= 2]
LEG_SMALL = [e.key for e in catalog.list_entries(kind="Legendrian") if e.n <= 1]


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(LAG_SMALL), st.integers(12, 30))
def test_caustic_points_satisfy_equations(key, res):
    e = catalog.get(key)
    m = caustic(e.family, [(-1, 1)], res=res)
    for lab, resid, corner, det in independent_residuals(e.family, m):
        assert resid.max() < 1e-9, lab
        assert corner.min() >= -1e-9, lab
        if det is not None:
            assert det.max() < 1e-6, lab


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(LEG_SMALL), st.integers(12, 40))
def test_wavefront_points_satisfy_equations(key, res):
    e = catalog.get(key, LEGENDRIAN)
    m = wavefront(e.family, [(-1, 1)], res=res)
    for lab, resid, corner, _ in independent_residuals(e.family, m):
        assert resid.max() < 1e-9 and corner.min() >= -1e-9, lab


class TestWavefront:
    def test_a2_cusp(self):
        m = wavefront(fam("y1^3 + q1*y1 + z", 0, 1, ["q1", "z"], LEGENDRIAN), [(-1, 1)], res=80)
        t = np.linspace(-0.6, 0.6, 400001)
        curve = np.c_[-3 * t ** 2, 2 * t ** 3]
        curve = curve[(np.abs(curve) <= 1).all(axis=1)]
        a, b = hausdorff_to_curve(m.points, curve)
        assert a < 1e-3 and b < 1e-3

    def test_b2(self):
        m = wavefront(fam("x1^2 + q1*x1 + z", 1, 0, ["q1", "z"], LEGENDRIAN), [(-1, 1)], res=80)
        assert set(m.labels) == {"W_1", "W_empty"}
        assert np.abs(m.stratum("W_1")[:, 1]).max() < 1e-9
        W0 = m.stratum("W_empty")
        # x = -q1/2 >= 0 and F = 0 give z = q1^2/4 on q1 <= 0
        assert (W0[:, 0] <= 1e-9).all()
        assert np.abs(W0[:, 1] - W0[:, 0] ** 2 / 4).max() < 1e-9

    def test_a1_single_point(self):
        m = wavefront(fam("y1^2 + z", 0, 1, ["z"], LEGENDRIAN), [(-1, 1)], res=10)
        assert m.points.shape[1] == 1 and np.abs(m.points).max() < 1e-9

    def test_wrong_kind(self):
        with pytest.raises(ValueError):
            wavefront(A3, [(-1, 1)])


class TestConfig:
    def test_defaults(self):
        c = SolverConfig()
        assert (c.tol_eq, c.seed_box, c.newton_max_iter, c.damping) == (1e-9, (-2.0, 2.0), 50, 0.5)

    def test_file(self, tmp_path):
        p = tmp_path / "solver.cfg"
        p.write_text("# solver\nnewton_max_iter = 80\nseed_box = -3:3\ntol_eq=1e-10\n")
        c = load_config(p)
        assert c.newton_max_iter == 80 and c.seed_box == (-3.0, 3.0) and c.tol_eq == 1e-10

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("colour = blue\n")
        with pytest.raises(ValueError):
            load_config(p)

    def test_stratum_labels(self):
        assert stratum_label(()) == "empty" and stratum_label((0,)) == "1" and stratum_label((0, 1)) == "12"


class TestExport:
    @pytest.fixture
    def a3(self):
        return caustic(A3, [(-1, 1)], res=30)

    def test_csv(self, a3, tmp_path):
        p = export_mesh(a3, "csv", tmp_path / "a3.csv")
        lines = p.read_text().splitlines()
        assert lines[0] == "q1,q2,stratum"
        assert len(lines) == len(a3) + 1
        assert all(l.endswith(",C_empty") for l in lines[1:])

    def test_empty_csv(self, tmp_path):
        m = caustic(fam("y1^2 + q1*y1", 0, 1, ["q1"]), [(-1, 1)], res=10)
        p = export_mesh(m, "csv", tmp_path / "e.csv")
        assert p.read_text().splitlines() == ["q1,stratum"]
        with pytest.raises(ValueError):
            export_mesh(m, "obj", tmp_path / "e.obj")

    def test_obj_groups(self, tmp_path):
        m = caustic(catalog.get("F4+").family, [(-1, 1)], res=12)
        text = export_mesh(m, "obj", tmp_path / "f4.obj").read_text().splitlines()
        groups = [l[2:] for l in text if l.startswith("g ")]
        assert groups == ["C_1", "C_empty", "Q_empty_1"]
        verts = [l for l in text if l.startswith("v ")]
        assert len(verts) == len(m) and all(len(v.split()) == 4 for v in verts)

    def test_ply(self, a3, tmp_path):
        text = export_mesh(a3, "ply", tmp_path / "a3.ply").read_text().splitlines()
        assert text[0] == "ply" and text[1] == "format ascii 1.0"
        end = text.index("end_header")
        assert f"element vertex {len(a3)}" in text[:end]
        assert len(text) - end - 1 == len(a3)

    def test_unknown_format(self, a3, tmp_path):
        with pytest.raises(ValueError):
            export_mesh(a3, "stl", tmp_path / "x.stl")


def test_mesh_accessors():
    m = DiscriminantMesh(("q1",), np.array([[0.5], [0.1]]), ["C_empty", "C_empty"], np.zeros((2, 2)), ("y1", "q1"))
    assert m.ambient_dim == 1 and len(m) == 2
    assert m.sorted_rows()[0][0][0] == 0.1
