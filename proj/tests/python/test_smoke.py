"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import vxgs


@pytest.fixture(scope="module")
def line_grid():
    return vxgs.build_grid(1, "line1d", 12.0, 0.05)


def const_field(grid, value):
    return vxgs.Field(grid, np.full(len(grid), value))


def test_grid_basics(line_grid):
    assert len(line_grid) == 481
    assert line_grid.measure == pytest.approx(24.0, rel=1e-13)
    disk = vxgs.build_grid(2, "radialNd", 1.0, 1e-3)
    assert disk.measure == pytest.approx(math.pi, rel=1e-12)
    with pytest.raises(vxgs.Error):
        vxgs.build_grid(3, "cartesian2d", 5.0, 0.1)


def test_expr_parse_eval():
    e = vxgs.Expr.parse("4 - 0.5*exp(-r)")
    assert e.eval(r=0.0) == 3.5
    assert vxgs.Expr.parse("sech(0)^2").eval() == 1.0
    with pytest.raises(vxgs.Error):
        vxgs.Expr.parse("foo(r)")


def test_luxemburg_closed_form(line_grid):
    half = vxgs.build_grid(1, "line1d", 0.5, 0.05)  # measure one
    p = vxgs.Exponent.make(const_field(half, 4.0), 4.0)
    u = const_field(half, 2.0)
    assert vxgs.luxemburg_norm(u, p) == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert vxgs.weighted_modular(u, p, 2.0) == pytest.approx(0.25, rel=1e-13)
    m = vxgs.project_to_constraint(u, p)
    assert vxgs.luxemburg_norm(m, p) == pytest.approx(1.0, abs=1e-10)


def test_threshold_formula():
    assert vxgs.threshold(3.0, 4.0, 2.0) == pytest.approx(math.sqrt(3.0), abs=1e-12)
    assert vxgs.threshold(3.3, 3.3, 1.7) == 1.7


def test_solve_and_shoot(line_grid):
    opts = vxgs.SolveOptions()
    gs = vxgs.solve_limit_problem(4.0, 1.0, line_grid, opts)
    assert gs.converged
    oracle = vxgs.shooting_oracle(4.0, 1.0, 1)
    assert gs.lambda_ == pytest.approx(oracle, rel=5e-3)
    assert gs.constraint_defect <= 1e-9
    hist = gs.energy_history
    assert all(b <= a for a, b in zip(hist, hist[1:]))


def test_criterion_report(line_grid):
    p = vxgs.Exponent.make(const_field(line_grid, 4.0), 4.0)
    values = 1.0 - 0.5 * np.exp(-np.asarray([line_grid.radius(i) for i in range(len(line_grid))]) ** 2)
    V = vxgs.Potential.make(vxgs.Field(line_grid, values), 1.0)
    spec = vxgs.ProblemSpec.make(line_grid, p, V)
    rep = vxgs.check_criterion(spec, vxgs.SolveOptions())
    assert rep.strict
    assert rep.lambda1_upper < rep.threshold


def test_translation_rows(line_grid):
    radii = np.asarray([line_grid.radius(i) for i in range(len(line_grid))])
    sup = 2.0
    q = 1.0 - (radii / sup) ** 2
    u = vxgs.Field(line_grid, np.where(q > 1e-12, np.exp(-1.0 / np.where(q > 0, q, 1.0)), 0.0))
    p = vxgs.Exponent.make(const_field(line_grid, 4.0), 4.0)
    V = vxgs.Potential.make(const_field(line_grid, 1.0), 1.0)
    tab = vxgs.translation_experiment(u, p, V, [[3.0], [6.0]])
    for row in tab.rows:
        assert row.rho == pytest.approx(tab.rho_limit, abs=1e-12)


def test_axial_defect():
    grid = vxgs.build_grid(2, "cartesian2d", 4.0, 0.1)
    xs = np.asarray([grid.position(i) for i in range(len(grid))])
    w = vxgs.Field(grid, np.exp(-(xs[:, 0] ** 2 + xs[:, 1] ** 2)))
    rep = vxgs.axial_symmetry_defect(w, [[1.0, 0.0], [0.0, 1.0]])
    assert rep.defect <= 1e-8
