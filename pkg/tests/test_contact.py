import numpy as np
import pytest

from contactify import contact
from contactify._checks import DimensionMismatch, InvariantViolation
from contactify.sampling import random_sphere_point, random_tangent


def test_liouville_against_hermitian_form(rng):
    for n in (1, 2, 3):
        x = random_sphere_point(n, rng)
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert contact.liouville(x, v) == pytest.approx(0.5 * np.imag(np.vdot(x, v)), abs=1e-15)


def test_dtheta_is_exterior_derivative(rng):
    # for constant fields v, w on C^n: d theta(v, w) = v(theta(w)) - w(theta(v))
    x = random_sphere_point(3, rng)
    v, w = random_tangent(x, rng), random_tangent(x, rng)
    eps = 1e-6
    dv = (contact.liouville(x + eps * v, w) - contact.liouville(x - eps * v, w)) / (2 * eps)
    dw = (contact.liouville(x + eps * w, v) - contact.liouville(x - eps * w, v)) / (2 * eps)
    assert contact.dtheta(x, v, w) == pytest.approx(dv - dw, abs=1e-9)


def test_reeb_axioms(rng):
    for n in (1, 2, 3):
        x = random_sphere_point(n, rng)
        R = contact.reeb(x)
        assert contact.liouville(x, R) == pytest.approx(1.0, abs=1e-15)
        for w in contact.tangent_basis(x):
            assert abs(contact.dtheta(x, R, w)) < 1e-15


def test_tangent_basis_is_orthonormal(rng):
    x = random_sphere_point(3, rng)
    basis = contact.tangent_basis(x)
    assert len(basis) == 5
    real = np.array([np.concatenate([b.real, b.imag]) for b in basis])
    np.testing.assert_allclose(real @ real.T, np.eye(5), atol=1e-14)
    for b in basis:
        assert abs(np.real(np.vdot(x, b))) < 1e-14
    for b in basis[1:]:
        assert abs(contact.liouville(x, b)) < 1e-14


def test_contact_condition(rng):
    for n in (2, 3, 4):
        ok, det = contact.contact_condition(random_sphere_point(n, rng))
        assert ok
        assert abs(det) == pytest.approx(1.0, abs=1e-12)


def test_characteristic_direction_is_reeb_line(rng):
    x = random_sphere_point(2, rng)
    dirs = contact.characteristic_directions(x)
    assert len(dirs) == 1
    assert abs(abs(np.real(np.vdot(1j * x, dirs[0]))) - 1.0) < 1e-12


def test_hopf_map_basics(rng):
    x = random_sphere_point(2, rng)
    p = contact.hopf_map(x)
    assert np.linalg.norm(p) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(contact.hopf_map(np.exp(0.7j) * x), p, atol=1e-15)
    np.testing.assert_allclose(contact.hopf_map([1, 0]), [0, 0, 1])
    np.testing.assert_allclose(contact.hopf_map([0, 1]), [0, 0, -1])
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(contact.hopf_map([s, s]), [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(contact.hopf_map([s, 1j * s]), [0, 1, 0], atol=1e-15)


def test_hopf_jacobian_against_finite_differences(rng):
    x = random_sphere_point(2, rng)
    J = contact.hopf_jacobian(x)
    eps = 1e-6
    for k, e in enumerate(np.eye(4)):
        d = e[:2] + 1j * e[2:]
        fd = (contact._hopf(x + eps * d) - contact._hopf(x - eps * d)) / (2 * eps)
        np.testing.assert_allclose(J[:, k], fd, atol=1e-9)
    np.testing.assert_allclose(contact.hopf_pushforward(x, 1j * x), 0, atol=1e-14)


def test_hopf_pullback(rng):
    for _ in range(200):
        x = random_sphere_point(2, rng)
        lhs, rhs = contact.hopf_pullback_check(x, random_tangent(x, rng), random_tangent(x, rng))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_monopole_flux():
    assert contact.monopole_flux() == pytest.approx(4 * np.pi, abs=1e-12)


def test_s2_quadrature_on_polynomial():
    # z^2 vol integrates to 4 pi / 3
    val = contact.integrate_s2(lambda p, a, b: p[2] ** 2 * contact.monopole_form(p, a, b))
    assert val == pytest.approx(4 * np.pi / 3, abs=1e-12)


def test_monopole_form_rejects_normal_vectors():
    p = np.array([0.0, 0.0, 1.0])
    with pytest.raises(InvariantViolation):
        contact.monopole_form(p, p, np.array([1.0, 0, 0]))


def test_input_validation():
    with pytest.raises(InvariantViolation):
        contact.reeb([1.0, 1.0])
    with pytest.raises(DimensionMismatch):
        contact.hopf_map([1.0, 0, 0])
    x = np.array([1, 0], dtype=complex)
    with pytest.raises(InvariantViolation):
        contact.dtheta(x, x, 1j * x)
