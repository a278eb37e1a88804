import numpy as np
import pytest

from gmas import fixtures
from gmas.exterior import Form, Omega0, dp, dx, dz
from gmas.jetspace import JetSpace
from gmas.monge import GMAS, gmas_to_gmae
from gmas.symexpr import MissingBindingError, p, x, z
from gmas.verify import (
    Analytic,
    CandidateSolution,
    ClosedForm,
    NumericGrid,
    check_both,
    check_integral_manifold,
    fd_weights,
    lattice_samples,
    oracle_pullback,
    prolong,
    random_samples,
    residual,
    symbolic_pullback_values,
)
from oracles import kdv_residual

X1, X2 = x(1), x(2)


def fixture_solution(fx):
    comps = []
    for s in fx.solution:
        try:
            comps.append(ClosedForm(_poly(s)))
        except ValueError:
            comps.append(Analytic(s, fx.gmas.js.n))
    return CandidateSolution(fx.gmas.js.n, tuple(comps))


def _poly(s):
    from gmas.documents import DocumentError, parse_expr

    try:
        return parse_expr(s, JetSpace(2, 1, 1), allow_coefficients=False)
    except DocumentError as exc:
        raise ValueError(str(exc))


# ---- prolong ------------------------------------------------------------


def test_prolong_harmonic_polynomial():
    pro = prolong(CandidateSolution(2, (X1 ** 2 - X2 ** 2,)), 2)
    pts = np.array([[0.3, -0.7], [1.5, 2.0]])
    assert np.all(pro(1, (1, 1), pts) == 2)
    assert np.all(pro(1, (2, 2), pts) == -2)
    assert np.all(pro(1, (1, 2), pts) == 0)


def test_prolong_holomorphic_square():
    pro = prolong(CandidateSolution(2, (X1 ** 2 - X2 ** 2, 2 * X1 * X2)), 1)
    pts = random_samples(2, 10, seed=4).points
    assert np.allclose(pro(1, (1,), pts), pro(2, (2,), pts))
    assert np.allclose(pro(1, (2,), pts), -pro(2, (1,), pts))
    assert np.allclose(pro(1, (1,), pts), 2 * pts[:, 0])


def test_prolong_sin_grid_third_derivative():
    axis = np.arange(0, 3 + 1e-12, 0.01)
    grid = NumericGrid.sample(np.sin, [axis])
    pro = prolong(CandidateSolution(1, (grid,)), 3)
    pts = grid.points(3)
    err = np.abs(pro(1, (1, 1, 1), pts) + np.cos(pts[:, 0]))
    assert err.max() < 1e-3


def test_prolong_grid_too_small():
    axis = np.linspace(0, 1, 5)
    grid = NumericGrid.sample(np.sin, [axis])
    with pytest.raises(ValueError, match="needs at least"):
        prolong(CandidateSolution(1, (grid,)), 3)


def test_prolong_symmetric_keys():
    pro = prolong(CandidateSolution(2, (X1 ** 3 * X2,)), 2)
    assert (1, (2, 1)) not in pro.table and (1, (1, 2)) in pro.table


def test_fd_weights_second_derivative():
    r, w = fd_weights(2)
    assert r == 1 and np.allclose(w, [1, -2, 1])
    r, w = fd_weights(3)
    assert r == 2 and np.allclose(w, [-0.5, 1, 0, -1, 0.5])


def test_candidate_validation():
    with pytest.raises(ValueError):
        ClosedForm(z())
    with pytest.raises(ValueError):
        CandidateSolution(1, (X2,))


# ---- residual -----------------------------------------------------------


def test_residual_laplace():
    fx = fixtures.get("classical_ma")
    e = gmas_to_gmae(fx.gmas)
    rep = residual(e, CandidateSolution(2, (X1 ** 2 - X2 ** 2,)), coefficients=fx.coefficients)
    assert rep.passed and rep.max_residual == 0 and rep.tolerance == 0
    assert rep.method == "exact symbolic"


def test_residual_missing_binding():
    fx = fixtures.get("classical_ma")
    with pytest.raises(MissingBindingError):
        residual(gmas_to_gmae(fx.gmas), CandidateSolution(2, (X1,)), coefficients={})


def test_kdv_analytic_residual_on_lattice():
    fx = fixtures.get("kdv")
    sol = fixture_solution(fx)
    samples = lattice_samples([(-5, 5, 0.1), (-1, 1, 0.1)])
    assert len(samples) == 101 * 21
    rep = residual(gmas_to_gmae(fx.gmas), sol, samples)
    oracle = kdv_residual(1, samples.points[:, 0], samples.points[:, 1])
    assert np.abs(oracle).max() <= 1e-8
    assert rep.passed and rep.max_residual <= 1e-8 and rep.tolerance == 1e-8


def test_kdv_non_solution_fails():
    fx = fixtures.get("kdv")
    sol = CandidateSolution(2, (Analytic("sech(x1 - x2)**2", 2),))
    assert not residual(gmas_to_gmae(fx.gmas), sol, lattice_samples([(-2, 2, 0.5), (-1, 1, 0.5)])).passed


def _kdv_grid_residual(h):
    axes = [np.arange(-4, 4 + 1e-9, h), np.arange(-1, 1 + 1e-9, h)]
    f = lambda a, b: 3 / np.cosh((a - b) / 2) ** 2
    grid = NumericGrid.sample(f, axes)
    fx = fixtures.get("kdv")
    # evaluate on a fixed coarse set of lattice points shared by both grids
    pts = lattice_samples([(-3, 3, 0.5), (-0.5, 0.5, 0.5)])
    rep = residual(gmas_to_gmae(fx.gmas), CandidateSolution(2, (grid,)), pts)
    return rep


def test_kdv_finite_difference_convergence():
    coarse, fine = _kdv_grid_residual(0.05), _kdv_grid_residual(0.025)
    assert coarse.passed and fine.passed
    assert coarse.tolerance == pytest.approx(10 * 0.05 ** 2)
    ratio = coarse.max_residual / fine.max_residual
    assert 3.5 < ratio < 4.5


def test_cauchy_riemann_identity_map():
    fx = fixtures.get("cauchy_riemann")
    rep = residual(gmas_to_gmae(fx.gmas), CandidateSolution(2, (X1, X2)))
    assert rep.residuals == [0, 0]


# ---- integral manifold --------------------------------------------------


def test_integral_manifold_classical_laplace():
    fx = fixtures.get("classical_ma")
    rep = check_integral_manifold(fx.gmas, CandidateSolution(2, (X1 ** 2 - X2 ** 2,)), coefficients=fx.coefficients)
    assert rep.passed and rep.max_residual == 0 and rep.canonical_exact


def test_integral_manifold_cauchy_riemann():
    fx = fixtures.get("cauchy_riemann")
    sol = CandidateSolution(2, (X1 ** 2 - X2 ** 2, 2 * X1 * X2))
    r1, r2 = check_both(fx.gmas, sol)
    assert r1.passed and r2.passed and r2.max_residual == 0


def test_integral_manifold_cauchy_riemann_failure():
    fx = fixtures.get("cauchy_riemann")
    rep = check_integral_manifold(fx.gmas, CandidateSolution(2, (X1, -X2)))
    assert not rep.passed
    assert rep.per_group() == [2.0, 0.0]
    assert [e.label for e in rep.failures()] == ["Psi1[dx1^dx2]"]
    assert not rep.verdicts.any()


def test_integral_manifold_drops_high_degree():
    js = JetSpace(2, 1, 1)
    g = GMAS(js, (dp([1]) - dx(1), dx(1) ^ dx(2) ^ dp([1])))
    rep = check_integral_manifold(g, CandidateSolution(2, (X1 ** 2 / 2,)))
    assert rep.dropped == [1] and rep.passed


def test_callback_coefficients():
    fx = fixtures.get("classical_ma")
    coeffs = {k: (lambda X, Z, P: np.zeros(len(X))) for k in fx.coefficients}
    coeffs["A^{1}_{2}"] = lambda X, Z, P: -np.ones(len(X))
    coeffs["A^{2}_{1}"] = lambda X, Z, P: np.ones(len(X))
    r1, r2 = check_both(fx.gmas, CandidateSolution(2, (X1 ** 2 - X2 ** 2,)), None, coeffs)
    assert r1.passed and r2.passed and r1.tolerance == 0
    assert r1.max_residual < 1e-12


def test_report_serialization():
    fx = fixtures.get("cauchy_riemann")
    rep = check_integral_manifold(fx.gmas, CandidateSolution(2, (X1, -X2)))
    d = rep.to_dict()
    assert d["passed"] is False and d["entries"][0]["max_abs_residual"] == 2.0
    table = rep.to_table()
    assert "FAIL" in table and "Psi1[dx1^dx2]" in table


# ---- oracle pullback ----------------------------------------------------


def test_oracle_singular_hessian():
    js = JetSpace(2, 1, 1)
    sol = CandidateSolution(2, (X1 ** 2 / 2 + 2 * X1 * X2 + 2 * X2 ** 2,))
    val = oracle_pullback(dp([1]) ^ dp([2]), sol, [0.2, 0.4], js)
    assert np.allclose(val, 0)


def test_oracle_contact_form_vanishes():
    js = JetSpace(2, 1, 1)
    sol = CandidateSolution(2, (X1 ** 3 - X1 * X2,))
    w = Form.basis(Omega0(1))
    assert np.allclose(oracle_pullback(w, sol, [0.5, -0.1], js), 0)
    assert np.allclose(oracle_pullback(dz() - p([1]) * dx(1) - p([2]) * dx(2), sol, [0.5, -0.1], js), 0)


def test_oracle_volume_form():
    js = JetSpace(2, 1, 1)
    val = oracle_pullback(dx(1) ^ dx(2), CandidateSolution(2, (X1,)), [0, 0], js)
    assert val[0, 1] == 1 and val[1, 0] == -1


def test_oracle_outside_domain():
    js = JetSpace(2, 1, 1)
    with pytest.raises(ValueError, match="outside"):
        oracle_pullback(dx(1), CandidateSolution(2, (X1,)), [3, 0], js, domain=[(-1, 1), (-1, 1)])


@pytest.mark.parametrize("name", fixtures.names())
def test_oracle_matches_symbolic_pullback(name):
    fx = fixtures.get(name)
    js = fx.gmas.js
    sol = fixture_solution(fx)
    for pt in random_samples(js.n, 5, seed=9).points:
        for gen in fx.gmas.generators:
            oracle = oracle_pullback(gen, sol, pt, js, fx.coefficients)
            for rows, v in symbolic_pullback_values(gen, sol, pt, js, fx.coefficients).items():
                o = oracle[tuple(r - 1 for r in rows)]
                assert abs(o - v) <= 1e-9 * max(1.0, abs(v))
