import numpy as np
import pytest

from contactify import contact, dynamics
from contactify._checks import ContactifyError, StepRejected
from contactify.sampling import random_s2_point, random_s2_tangent, random_sphere_point

H_Z = dynamics.linear_z()
H_Q = dynamics.quadratic(linear=(0.2, -0.1, 0.3), matrix=[[1.0, 0.3, 0], [0.3, -0.4, 0.2], [0, 0.2, 0.6]])


def analytic_rotation(p0, t):
    x0, y0, z0 = p0
    return np.stack([np.cos(t) * x0 + np.sin(t) * y0, np.cos(t) * y0 - np.sin(t) * x0,
                     np.full_like(t, z0)], axis=1)


def fd_dhhat(H, x, w, eps=1e-6):
    f = lambda y: H.evaluate(contact._hopf(y))
    return (f(x + eps * w) - f(x - eps * w)) / (2 * eps)


def solve_el_system(x, H, gauge):
    # least-squares solve over a tangent basis with finite-difference dHhat
    basis = contact.tangent_basis(x)
    rows, rhs = [], []
    for w in basis:
        rows.append([contact.dtheta(x, b, w) for b in basis])
        rhs.append(-fd_dhhat(H, x, w))
    rows.append([np.real(np.vdot(b, 2j * x)) for b in basis])
    rhs.append(gauge)
    c, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sum(ck * b for ck, b in zip(c, basis))


def test_field_example():
    p = np.array([0.36, 0.48, 0.8])
    np.testing.assert_allclose(dynamics.hamiltonian_field_s2(H_Z, p), [0.48, -0.36, 0.0], atol=1e-15)
    const = dynamics.quadratic(constant=2.0)
    np.testing.assert_allclose(dynamics.hamiltonian_field_s2(const, p), 0.0)


def test_field_identity(rng):
    for _ in range(100):
        p = random_s2_point(rng)
        w = random_s2_tangent(p, rng)
        X = dynamics.hamiltonian_field_s2(H_Q, p)
        assert contact.monopole_form(p, X, w) / 4 == pytest.approx(-np.dot(H_Q.tangential_gradient(p), w), abs=1e-12)


def test_gradients_are_consistent(rng):
    pts = [random_s2_point(rng) for _ in range(20)]
    assert dynamics.check_gradient(H_Q, pts) < 1e-8
    L = dynamics.lift(H_Q)
    for _ in range(10):
        x = random_sphere_point(2, rng)
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert np.real(np.vdot(L.gradient(x), w)) == pytest.approx(fd_dhhat(H_Q, x, w), abs=1e-8)


def test_flow_s2_matches_rotation(rng):
    p0 = random_s2_point(rng)
    t, pts = dynamics.flow_s2(H_Z, p0, 2 * np.pi, 1e-3)
    assert np.max(np.linalg.norm(pts - analytic_rotation(p0, t), axis=1)) < 1e-10
    assert np.max(np.abs(pts[:, 2] - p0[2])) < 1e-9


def test_flow_s2_conserves_energy(rng):
    p0 = random_s2_point(rng)
    _, pts = dynamics.flow_s2(H_Q, p0, 10.0, 1e-3)
    E = np.array([H_Q.evaluate(p) for p in pts])
    assert np.max(np.abs(E - E[0])) < 1e-8


def test_el_velocity_against_linear_system(rng):
    for gauge in (0.0, 1.0, -0.5):
        for _ in range(5):
            x = random_sphere_point(2, rng)
            v = dynamics.el_velocity(x, H_Q, gauge)
            np.testing.assert_allclose(v, solve_el_system(x, H_Q, gauge), atol=1e-8)
            assert dynamics.el_residual(x, v, H_Q) < 1e-12
            assert np.real(np.vdot(v, contact.reeb(x))) == pytest.approx(gauge, abs=1e-14)


def test_el_velocity_projects_to_field(rng):
    for _ in range(20):
        x = random_sphere_point(2, rng)
        v = dynamics.el_velocity(x, H_Q)
        np.testing.assert_allclose(contact.hopf_pushforward(x, v),
                                   dynamics.hamiltonian_field_s2(H_Q, contact.hopf_map(x)), atol=1e-12)


def test_el_velocity_constant_hamiltonian(rng):
    x = random_sphere_point(2, rng)
    np.testing.assert_allclose(dynamics.el_velocity(x, dynamics.quadratic(constant=1.0)), 0.0)


def test_el_velocity_rejects_non_invariant_hamiltonian(rng):
    L = dynamics.LiftedHamiltonian(evaluate=lambda x: float(np.real(x[0])),
                                   gradient=lambda x: np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ContactifyError, match="Reeb"):
        dynamics.el_velocity(np.array([0.6j, 0.8]), L)


def test_el_flow_projection_and_torus(rng):
    x0 = random_sphere_point(2, rng)
    traj = dynamics.el_flow(H_Z, x0, 2 * np.pi, 1e-3)
    p0 = contact.hopf_map(x0)
    assert np.max(np.linalg.norm(traj.projected - analytic_rotation(p0, traj.times), axis=1)) < 1e-10
    mods = np.abs(traj.states)
    assert np.max(np.abs(mods - mods[0])) < 1e-10
    assert np.max(np.abs(traj.hhat - traj.hhat[0])) < 1e-12


def test_el_flow_matches_flow_s2_for_quadratic(rng):
    x0 = random_sphere_point(2, rng)
    traj = dynamics.el_flow(H_Q, x0, 2.0, 1e-3, gauge=0.5)
    _, pts = dynamics.flow_s2(H_Q, contact.hopf_map(x0), 2.0, 1e-3)
    assert np.max(np.linalg.norm(traj.projected - pts, axis=1)) < 1e-9


def test_el_flow_single_point():
    traj = dynamics.el_flow(H_Z, np.array([1.0, 0.0]), 0.0, 1e-3)
    assert traj.times.shape == (1,) and traj.states.shape == (1, 2)


def test_step_rejection():
    with pytest.raises(StepRejected):
        dynamics.el_flow(H_Z, np.array([0.6, 0.8]), 10.0, 5.0, gauge=8.0)


def test_time_grid():
    t, h = dynamics.time_grid(1.0, 0.3)
    assert h == pytest.approx(0.25) and t[-1] == pytest.approx(1.0) and len(t) == 5
    t, h = dynamics.time_grid(1.0, 0.25)
    assert len(t) == 5
    with pytest.raises(ContactifyError):
        dynamics.time_grid(1.0, 0.0)


def test_action_closed_form_in_every_gauge():
    # on a solution Hhat - theta(v) = |z1|^2 / 2 - c / 4 for H = (z + 1) / 4
    x0 = np.array([np.sqrt(0.6), np.sqrt(0.4) * 1j])
    for c in (-1.0, 0.0, 1.0, 1.2):
        traj = dynamics.el_flow(H_Z, x0, 2 * np.pi, 1e-3, gauge=c)
        val = dynamics.action_functional(traj)
        assert val.value == pytest.approx(2 * np.pi * (0.6 / 2 - c / 4), abs=1e-10)
        assert val.hamiltonian_part == pytest.approx(np.pi * 0.6, abs=1e-10)
        assert val.value == pytest.approx(val.hamiltonian_part - val.form_part, abs=1e-15)


def test_action_pointwise_integrand():
    x0 = np.array([np.sqrt(0.6), np.sqrt(0.4)])
    c = 0.3
    L = dynamics.lift(H_Z)
    traj = dynamics.el_flow(H_Z, x0, 1.0, 1e-2, gauge=c)
    for x in traj.states[::10]:
        v = dynamics.el_velocity(x, H_Z, c)
        assert L.evaluate(x) - contact.liouville(x, v) == pytest.approx(0.3 - c / 4, abs=1e-14)


def test_action_constant_path():
    times = np.linspace(0, 1, 11)
    states = np.tile(np.array([0.6, 0.8j]), (11, 1))
    traj = dynamics.Trajectory.from_states(times, states, H=dynamics.quadratic())
    assert dynamics.action_functional(traj).value == 0.0


def test_action_richardson(rng):
    x0 = random_sphere_point(2, rng)
    coarse = dynamics.action_functional(dynamics.el_flow(H_Q, x0, 1.0, 2e-2))
    fine = dynamics.action_functional(dynamics.el_flow(H_Q, x0, 1.0, 1e-2))
    assert abs(coarse.value - fine.value) < 1e-6


def test_action_requires_uniform_grid():
    states = np.tile(np.array([1.0, 0.0]), (4, 1))
    traj = dynamics.Trajectory.from_states([0, 0.1, 0.3, 0.4], states, H=H_Z)
    with pytest.raises(ContactifyError, match="uniform"):
        dynamics.action_functional(traj)
    short = dynamics.Trajectory.from_states([0, 0.1], states[:2], H=H_Z)
    with pytest.raises(ContactifyError):
        dynamics.action_functional(short)


def test_stationarity_on_solution_and_counterexample(rng):
    traj = dynamics.el_flow(H_Z, random_sphere_point(2, rng), np.pi, 1e-3)
    u = np.array([1.0, 0.0], dtype=complex)
    w = np.array([0.0, 1.0], dtype=complex)
    circle = dynamics.Trajectory.from_states(traj.times, dynamics.great_circle(u, w, traj.times), H=H_Z)
    off = []
    for mode in (1, 2, 3):
        delta = dynamics.admissible_perturbation(traj, rng, mode)
        d = dynamics.stationarity_test(traj, H_Z, delta, 1e-4)
        assert abs(d) < 1e-6
        assert abs(dynamics.first_variation(traj, H_Z, delta)) < 1e-8
        delta_c = dynamics.admissible_perturbation(circle, rng, mode)
        dc = dynamics.stationarity_test(circle, H_Z, delta_c, 1e-4)
        assert dc == pytest.approx(dynamics.first_variation(circle, H_Z, delta_c), abs=1e-6)
        off.append(abs(dc))
    assert max(off) >= 1e-3


def test_stationarity_preconditions(rng):
    traj = dynamics.el_flow(H_Z, np.array([0.6, 0.8]), 1.0, 1e-2)
    zero = np.zeros_like(traj.states)
    assert dynamics.stationarity_test(traj, H_Z, zero, 1e-4) == 0.0
    delta = dynamics.admissible_perturbation(traj, rng)
    with pytest.raises(ContactifyError):
        dynamics.stationarity_test(traj, H_Z, delta, 0.1)
    bad = delta.copy()
    bad[0] = 1j * traj.states[0]
    with pytest.raises(ContactifyError, match="endpoints"):
        dynamics.stationarity_test(traj, H_Z, bad, 1e-4)
    bad = delta.copy()
    bad[3] = traj.states[3]
    with pytest.raises(ContactifyError):
        dynamics.stationarity_test(traj, H_Z, bad, 1e-4)


def test_time_reversed_circle_is_not_stationary(rng):
    # (e^{-it} z1, z2) carries the value 2 pi |z1|^2 but is not an EL solution
    z1, z2 = np.sqrt(0.6), np.sqrt(0.4)
    times, _ = dynamics.time_grid(2 * np.pi, 1e-3)
    states = np.stack([z1 * np.exp(-1j * times), np.full(times.shape, z2, dtype=complex)], axis=1)
    curve = dynamics.Trajectory.from_states(times, states, gauge="none", H=H_Z)
    assert dynamics.action_functional(curve).value == pytest.approx(2 * np.pi * 0.6, abs=1e-9)
    delta = dynamics.admissible_perturbation(curve, rng, 1)
    assert abs(dynamics.first_variation(curve, H_Z, delta)) > 1e-3
    forward = dynamics.Trajectory.from_states(times, np.conj(states), gauge="none", H=H_Z)
    delta = dynamics.admissible_perturbation(forward, rng, 1)
    assert abs(dynamics.first_variation(forward, H_Z, delta)) < 1e-8
