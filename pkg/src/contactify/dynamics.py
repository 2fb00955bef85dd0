"""Hamiltonian flow on (S^2, vol/4) and its lift to the contactification S^3.

A Hamiltonian ``H`` on the base is lifted to ``Hhat = H o hopf_map``. Paths on
the sphere solving ``i_{gamma'} d theta + d Hhat = 0`` are stationary for the
action ``int Hhat dt - int_gamma theta`` and project to trajectories of ``X_H``.
The equation leaves the Reeb component of the velocity free; it is fixed by a
gauge ``g(gamma', R) = c`` with ``R = 2 i x`` the Reeb field.
"""

from dataclasses import dataclass
from math import ceil
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from ._checks import (
    ContactifyError,
    DimensionMismatch,
    InvariantViolation,
    StepRejected,
    as_sphere_point,
    check_tangent,
)
from .contact import _hopf, _hopf_jacobian, dtheta, hopf_map, liouville, tangent_basis

RENORMALIZE_LIMIT = 1e-3
REEB_COMPONENT_TOL = 1e-10


@dataclass(frozen=True)
class HamiltonianOnBase:
    """Function on S^2 with its ambient (R^3) gradient."""

    evaluate: Callable
    gradient: Callable
    name: str = "custom"

    def tangential_gradient(self, p):
        g = np.asarray(self.gradient(p), dtype=float)
        return g - np.dot(p, g) * p


def linear_z():
    """``H = (z + 1) / 4``."""
    return HamiltonianOnBase(
        evaluate=lambda p: (p[2] + 1.0) / 4.0,
        gradient=lambda p: np.array([0.0, 0.0, 0.25]),
        name="linear-z",
    )


def quadratic(linear=(0.0, 0.0, 0.0), matrix=None, constant=0.0):
    """``H(p) = constant + linear . p + p.Q.p / 2`` with ``Q`` symmetrized."""
    b = np.asarray(linear, dtype=float)
    Q = np.zeros((3, 3)) if matrix is None else np.asarray(matrix, dtype=float)
    if b.shape != (3,) or Q.shape != (3, 3):
        raise DimensionMismatch("quadratic Hamiltonian needs a 3-vector and a 3x3 matrix")
    Q = 0.5 * (Q + Q.T)
    return HamiltonianOnBase(
        evaluate=lambda p: float(constant + b @ p + 0.5 * p @ Q @ p),
        gradient=lambda p: b + Q @ p,
        name="quadratic",
    )


def check_gradient(H, points, rtol=1e-6, step=1e-5):
    """Largest relative mismatch between ``H.gradient`` and central differences of ``H.evaluate``."""
    worst = 0.0
    for p in points:
        g = np.asarray(H.gradient(p), dtype=float)
        fd = np.array(
            [(H.evaluate(p + step * e) - H.evaluate(p - step * e)) / (2 * step) for e in np.eye(3)]
        )
        worst = max(worst, np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g)))
    if worst > rtol:
        raise InvariantViolation(f"gradient disagrees with finite differences ({worst:.3e})")
    return worst


@dataclass(frozen=True)
class LiftedHamiltonian:
    """Function on S^{2n-1} given with its ambient gradient ``G`` (``dHhat(w) = Re<G|w>``)."""

    evaluate: Callable
    gradient: Callable
    name: str = "custom"


def lift(H):
    """Pull ``H`` back along the Hopf map to S^3."""
    if isinstance(H, LiftedHamiltonian):
        return H

    def grad(x):
        r = _hopf_jacobian(x).T @ np.asarray(H.gradient(_hopf(x)), dtype=float)
        return r[:2] + 1j * r[2:]

    return LiftedHamiltonian(evaluate=lambda x: float(H.evaluate(_hopf(x))), gradient=grad, name=H.name)


def hamiltonian_field_s2(H, p):
    """``X_H`` for ``omega = vol_{S^2} / 4`` and ``i_{X_H} omega = -dH``: ``4 p x grad_S H``."""
    p = np.asarray(p, dtype=float)
    return 4.0 * np.cross(p, H.tangential_gradient(p))


def time_grid(t1, h):
    """Uniform grid on ``[0, t1]`` whose step is the largest value <= ``h`` that divides ``t1``."""
    if h <= 0 or t1 < 0:
        raise ContactifyError("need h > 0 and t1 >= 0")
    steps = ceil(t1 / h - 1e-9) if t1 > 0 else 0
    if steps == 0:
        return np.zeros(1), 0.0
    step = t1 / steps
    return step * np.arange(steps + 1), step


def _rk4_on_sphere(field, y0, times, step):
    out = np.empty((times.size,) + y0.shape, dtype=y0.dtype)
    out[0] = y0
    y = y0
    for k in range(1, times.size):
        k1 = field(y)
        k2 = field(y + 0.5 * step * k1)
        k3 = field(y + 0.5 * step * k2)
        k4 = field(y + step * k3)
        raw = y + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = np.linalg.norm(raw)
        if abs(norm - 1.0) > RENORMALIZE_LIMIT:
            raise StepRejected(f"step {k} left the sphere by {abs(norm - 1.0):.3e}; reduce h")
        y = raw / norm
        out[k] = y
    return out


def flow_s2(H, p0, t1, h):
    """RK4 integration of ``p' = X_H(p)`` with projection back to S^2. Returns ``(times, points)``."""
    p0 = np.asarray(p0, dtype=float)
    if abs(np.linalg.norm(p0) - 1.0) > 1e-12:
        raise InvariantViolation("p0 is not on the unit sphere")
    times, step = time_grid(t1, h)
    return times, _rk4_on_sphere(lambda p: hamiltonian_field_s2(H, p), p0, times, step)


def el_velocity(x, H, gauge=0.0):
    """Velocity solving ``i_v d theta + d Hhat = 0`` on ``T_x S`` with ``g(v, R) = gauge``.

    With ``G`` the tangential gradient of ``Hhat`` the equation reads
    ``g(i v + G, w) = 0`` for all tangent ``w``, so ``v = i G`` up to a multiple
    of ``i x``; the gauge fixes that multiple to ``gauge / 2``. Solvability
    needs ``dHhat(i x) = 0``, i.e. a Hamiltonian invariant along the fibers.
    """
    return _el_velocity(as_sphere_point(x, tol=1e-10), lift(H), gauge)


def _el_velocity(x, L, gauge):
    # also evaluated at the slightly non-unit Runge-Kutta stages
    grad = np.asarray(L.gradient(x), dtype=complex)
    if grad.shape != x.shape:
        raise DimensionMismatch("Hamiltonian gradient has the wrong number of components")
    G = grad - np.real(np.vdot(x, grad)) * x / np.vdot(x, x).real
    reeb_part = np.real(np.vdot(1j * x, G))
    if abs(reeb_part) > REEB_COMPONENT_TOL * max(1.0, np.linalg.norm(G)):
        raise ContactifyError(
            f"Hamiltonian is not invariant along the Reeb fibers (dHhat(ix) = {reeb_part:.3e})"
        )
    return 1j * G + 0.5 * gauge * 1j * x


def el_residual(x, v, H):
    """``max_w |d theta(v, w) + dHhat(w)|`` over an orthonormal basis of ``T_x S``."""
    x = as_sphere_point(x, tol=1e-10)
    grad = lift(H).gradient(x)
    return max(abs(dtheta(x, v, w) + np.real(np.vdot(grad, w))) for w in tangent_basis(x))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    projected: np.ndarray
    step: float
    gauge: str
    hhat: np.ndarray | None = None

    def __post_init__(self):
        if not (len(self.times) == len(self.states) == len(self.projected)):
            raise DimensionMismatch("times, states and projected must have equal length")
        norms = np.linalg.norm(self.states, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise InvariantViolation("trajectory state off the unit sphere")

    @classmethod
    def from_states(cls, times, states, gauge="none", H=None):
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=complex)
        step = float(times[1] - times[0]) if times.size > 1 else 0.0
        projected = np.array([hopf_map(s) for s in states]) if states.shape[1] == 2 else np.zeros((len(states), 3))
        hhat = None
        if H is not None:
            L = lift(H)
            hhat = np.array([L.evaluate(s) for s in states])
        return cls(times, states, projected, step, gauge, hhat)


def gauge_tag(gauge):
    return "orthogonal" if gauge == 0 else f"constant:{gauge!r}"


def el_flow(H, x0, t1, h, gauge=0.0):
    """Integrate the gauge-fixed Euler-Lagrange velocity with RK4 and unit renormalization."""
    x0 = as_sphere_point(x0, tol=1e-10)
    times, step = time_grid(t1, h)
    L = lift(H)
    states = _rk4_on_sphere(lambda x: _el_velocity(x, L, gauge), x0.astype(complex), times, step)
    return Trajectory.from_states(times, states, gauge=gauge_tag(gauge), H=H)


@dataclass(frozen=True)
class ActionValue:
    value: float
    hamiltonian_part: float
    form_part: float
    quadrature: str = "simpson/fd4"


def _uniform_step(times):
    times = np.asarray(times, dtype=float)
    if times.size < 3:
        raise ContactifyError("the action needs at least 3 samples")
    d = np.diff(times)
    if np.max(np.abs(d - d[0])) > 1e-9 * max(1.0, abs(d[0])):
        raise ContactifyError("times are not uniformly spaced")
    return float(d[0])


def derivative_fd4(values, h):
    """Fourth-order finite-difference derivative along axis 0; one-sided at the ends."""
    f = np.asarray(values)
    m = f.shape[0]
    if m < 5:
        return np.gradient(f, h, axis=0, edge_order=2)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


def _action(times, states, hhat_values):
    h = _uniform_step(times)
    velocity = derivative_fd4(states, h)
    form = np.array([liouville(s, v) for s, v in zip(states, velocity)])
    hpart = float(simpson(hhat_values, dx=h))
    fpart = float(simpson(form, dx=h))
    return ActionValue(hpart - fpart, hpart, fpart)


def action_functional(traj, H=None):
    """``int Hhat(gamma) dt - int_gamma theta`` by Simpson's rule.

    The velocity comes from fourth-order differences of the states. Without
    ``H`` the trajectory's stored ``hhat`` samples are used.
    """
    if H is not None:
        L = lift(H)
        hhat = np.array([L.evaluate(s) for s in traj.states])
    elif traj.hhat is not None:
        hhat = traj.hhat
    else:
        raise ContactifyError("no Hamiltonian given and the trajectory carries no Hhat samples")
    return _action(traj.times, traj.states, hhat)


def stationarity_test(traj, H, perturbation, eps):
    """Central difference in ``eps`` of the action along ``gamma (+) eps delta``.

    ``(+)`` adds and renormalizes onto the sphere. ``perturbation`` holds one
    tangent vector per sample and must vanish at both ends.
    """
    if not 0 < eps <= 1e-2:
        raise ContactifyError("eps must lie in (0, 1e-2]")
    delta = np.asarray(perturbation, dtype=complex)
    if delta.shape != traj.states.shape:
        raise DimensionMismatch("perturbation must have one vector per trajectory sample")
    scale = max(1.0, float(np.max(np.abs(delta))))
    if np.max(np.abs(delta[[0, -1]])) > 1e-12 * scale:
        raise ContactifyError("perturbation must vanish at both endpoints")
    for x, d in zip(traj.states, delta):
        check_tangent(x, d, "perturbation", tol=1e-10)
    L = lift(H)

    def action_at(e):
        moved = traj.states + e * delta
        moved /= np.linalg.norm(moved, axis=1, keepdims=True)
        hhat = np.array([L.evaluate(s) for s in moved])
        return _action(traj.times, moved, hhat).value

    return (action_at(eps) - action_at(-eps)) / (2 * eps)


def first_variation(traj, H, perturbation):
    """``int (dHhat(delta) + d theta(gamma', delta)) dt`` evaluated pointwise along the path."""
    h = _uniform_step(traj.times)
    L = lift(H)
    velocity = derivative_fd4(traj.states, h)
    integrand = []
    for x, v, d in zip(traj.states, velocity, np.asarray(perturbation, dtype=complex)):
        v = v - np.real(np.vdot(x, v)) * x
        integrand.append(np.real(np.vdot(L.gradient(x), d)) + dtheta(x, v, d))
    return float(simpson(np.array(integrand), dx=h))


def admissible_perturbation(traj, rng, mode=1):
    """Smooth tangent field along ``traj`` vanishing at the ends: ``sin(mode pi t/T)`` times the
    tangential part of a random constant vector."""
    t = traj.times
    span = t[-1] - t[0]
    w = rng.normal(size=traj.states.shape[1]) + 1j * rng.normal(size=traj.states.shape[1])
    profile = np.sin(mode * np.pi * (t - t[0]) / span)
    profile[[0, -1]] = 0.0
    out = []
    for x, s in zip(traj.states, profile):
        out.append(s * (w - np.real(np.vdot(x, w)) * x))
    return np.array(out)


def great_circle(u, w, times):
    """Constant-speed great circle ``cos(t) u + sin(t) w`` for real-orthonormal ``u, w``."""
    u = np.asarray(u, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if abs(np.real(np.vdot(u, w))) > 1e-12 or abs(np.linalg.norm(u) - 1) > 1e-12 or abs(np.linalg.norm(w) - 1) > 1e-12:
        raise ContactifyError("great circle needs real-orthonormal u, w")
    times = np.asarray(times, dtype=float)
    return np.cos(times)[:, None] * u + np.sin(times)[:, None] * w
