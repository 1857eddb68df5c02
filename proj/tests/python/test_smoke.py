import math

import pytest

nh = pytest.importorskip("nharmonic")

FOUR_PI = 4.0 * math.pi


def test_mesh_counts():
    torus = nh.build_torus_mesh(2, 4, 1.0)
    assert torus.cell_count == 16
    assert abs(torus.total_volume - 1.0) < 1e-12
    ico = nh.build_icosphere_mesh(3)
    assert ico.node_count == 642


def test_constant_field_energy_is_zero():
    mesh = nh.build_torus_mesh(2, 8, 1.0)
    target = nh.TargetManifold.sphere(3)
    field = nh.constant_field(mesh, target, [0.0, 0.0, 1.0])
    params = nh.GrowthParams(n=2, N=3, p=2.3, delta=0.2, s=1.0)
    assert nh.total_energy(field, params) == 0.0
    result = nh.minimize(field, params, nh.SolverConfig())
    assert result.status == nh.SolveStatus.converged
    assert result.iterations == 0


def test_identity_energy_near_four_pi():
    mesh = nh.build_icosphere_mesh(4)
    field = nh.identity_sphere_field(mesh, nh.TargetManifold.sphere(3))
    assert abs(nh.dirichlet_energy(field, 2) - FOUR_PI) < 0.01 * FOUR_PI
    deg, residual = nh.degree(field)
    assert deg == 1
    assert residual < 0.05


def test_kernel_values():
    params = nh.GrowthParams(n=2, N=2, p=2.0, delta=0.0, s=0.0)
    assert nh.integrand([0.0, 0.0, 0.0, 0.0], params) == 0.0
    assert nh.weight(0.7, params) == 1.0
    pairing, v_gap, p_gap = nh.monotonicity_gap([1.0, 0.0], [0.0, 0.0], params)
    assert abs(pairing - 1.0) < 1e-14
    assert abs(v_gap - 1.0) < 1e-14
    assert abs(p_gap - 1.0) < 1e-14
    assert pairing >= nh.GAP_C0 * v_gap >= nh.GAP_C1 * p_gap


def test_cordes():
    assert nh.cordes_epsilon_max(2.0, 6) == 1.0
    assert nh.cordes_epsilon_max(3.5, 6) == 0.0
    assert nh.cordes_admissible(3, 5, 3.0)
    assert not nh.cordes_admissible(4, 1, 4.0)
    assert abs(nh.contraction_factor(0.19) - 0.9) < 1e-14


def test_rescaling_identity():
    params = nh.GrowthParams(n=2, N=3, p=2.4, delta=0.5, s=0.8)
    assert nh.rescaling_identity_check([0.3, -0.2, 0.9, 1.1, 0.0, 0.4], 0.37, params)


def test_small_continuation_run():
    mesh = nh.build_torus_mesh(2, 16, 1.0)
    target = nh.TargetManifold.sphere(3)
    field = nh.degree_field_torus(mesh, target, 1, 0.25)
    params = nh.GrowthParams(n=2, N=3, p=2.3, delta=0.1, s=1.0)
    schedule = nh.ContinuationSchedule([2.3, 2.2], [0.1, 0.05])
    cfg = nh.SolverConfig()
    cfg.max_iters = 30
    cfg.grad_tol = 1e-3
    cfg.initial_step = 0.02
    run = nh.run_continuation(field, schedule, params, cfg)
    assert len(run.trace) == 2
    assert run.trace[1].e_pdelta <= run.trace[0].e_pdelta
    csv = nh.trace_to_csv(run.trace)
    assert csv.startswith("k,p,delta,E_pdelta,D_n,entropy,residual,iterations,degree")


def test_bubble_report_on_quiet_field():
    mesh = nh.build_torus_mesh(2, 12, 1.0)
    target = nh.TargetManifold.sphere(3)
    field = nh.constant_field(mesh, target, [1.0, 0.0, 0.0])
    params = nh.GrowthParams(n=2, N=3, p=2.05, delta=0.01, s=1.0)
    report = nh.energy_identity_report(field, params)
    assert not report.concentration
    assert report.defect == 0.0
