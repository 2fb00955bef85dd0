"""The unit sphere S^{2n-1} in C^n with the restricted Liouville form, and the Hopf map S^3 -> S^2.

Coordinates on C^n are ``x_k = q^k + i p_k``. Points and tangent vectors are
complex arrays; a vector ``v`` is tangent at ``x`` when ``Re<x|v> = 0``.
"""

import numpy as np
from scipy.special import roots_legendre

from ._checks import (
    AmbiguityError,
    DimensionMismatch,
    InvariantViolation,
    STRUCTURAL_TOL,
    as_sphere_point,
    as_vector,
    check_tangent,
)

RANK_ZERO_TOL = 1e-10
RANK_AMBIGUOUS_TOL = 1e-6


def liouville(x, v):
    """``theta = 1/2 sum_k (q^k dp_k - p_k dq^k)`` at ``x`` evaluated on ``v``."""
    x = as_vector(x)
    v = as_vector(v, "v")
    if x.shape != v.shape:
        raise DimensionMismatch(f"point has {x.size} components, vector has {v.size}")
    q, p = x.real, x.imag
    dq, dp = v.real, v.imag
    return 0.5 * float(np.sum(q * dp - p * dq))


def dtheta(x, v, w):
    """``sum_k dq^k ^ dp_k`` on tangent vectors at ``x``; equals ``Im<v|w>``."""
    x = as_sphere_point(x)
    v = check_tangent(x, v, "v")
    w = check_tangent(x, w, "w")
    return float(np.sum(v.real * w.imag - v.imag * w.real))


def reeb(x):
    """Reeb field ``2 i x`` of the restricted Liouville form."""
    x = as_sphere_point(x)
    return 2j * x


def _realify(v):
    return np.concatenate([v.real, v.imag])


def _complexify(r):
    n = r.size // 2
    return r[:n] + 1j * r[n:]


def _gram_schmidt(seeds, skip, count):
    """Orthonormalize ``seeds`` against ``skip`` (already orthonormal) until ``count`` vectors."""
    frame = [_realify(s) for s in skip]
    out = []
    for s in seeds:
        r = _realify(s)
        for _ in range(2):
            for f in frame:
                r = r - np.dot(f, r) * f
        norm = np.linalg.norm(r)
        if norm > 1e-8:
            r = r / norm
            frame.append(r)
            out.append(_complexify(r))
            if len(out) == count:
                break
    return out


def _coordinate_seeds(n):
    seeds = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        seeds.extend((e, 1j * e))
    return seeds


def contact_plane_basis(x):
    """Real orthonormal basis of ``ker(theta) ∩ T_x S``, i.e. the real complement of ``{x, i x}``."""
    x = as_sphere_point(x)
    n = x.size
    basis = _gram_schmidt(_coordinate_seeds(n), [x, 1j * x], 2 * n - 2)
    if len(basis) != 2 * n - 2:
        raise InvariantViolation("could not build a basis of the contact plane")
    return basis


def tangent_basis(x):
    """Real orthonormal basis of ``T_x S^{2n-1}``: the unit Reeb direction ``i x`` first,
    then :func:`contact_plane_basis`."""
    x = as_sphere_point(x)
    return [1j * x] + contact_plane_basis(x)


def _skew_matrix(x, basis):
    k = len(basis)
    m = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            m[a, b] = dtheta(x, basis[a], basis[b])
            m[b, a] = -m[a, b]
    return m


def contact_condition(x):
    """Nondegeneracy of ``d theta`` on ``ker theta`` at ``x``.

    Returns ``(nondegenerate, det)`` where ``det`` is the determinant of the
    skew matrix of ``d theta`` in an orthonormal basis of the contact plane
    (1 for the empty basis on S^1).
    """
    x = as_sphere_point(x)
    m = _skew_matrix(x, contact_plane_basis(x))
    det = float(np.linalg.det(m)) if m.size else 1.0
    return abs(det) > STRUCTURAL_TOL, det


def characteristic_directions(x):
    """Basis of the kernel of ``d theta`` on ``T_x S``; always the Reeb line."""
    x = as_sphere_point(x)
    basis = tangent_basis(x)
    m = _skew_matrix(x, basis)
    _, s, vh = np.linalg.svd(m)
    ambiguous = (s > RANK_ZERO_TOL) & (s < RANK_AMBIGUOUS_TOL)
    if np.any(ambiguous):
        raise AmbiguityError(f"singular values {s[ambiguous]} leave the rank undecided")
    B = np.array(basis)
    return [row @ B for row, sv in zip(vh, s) if sv <= RANK_ZERO_TOL]


def _as_s3_point(x):
    x = as_sphere_point(x)
    if x.size != 2:
        raise DimensionMismatch(f"the Hopf map needs a point of C^2, got C^{x.size}")
    return x


def hopf_map(x):
    """``(a, b) -> (2 conj(a) b, |a|^2 - |b|^2)`` read in R^3 as ``(Re, Im, real)``.

    The conjugate sits on the first coordinate so that ``d theta`` is the
    pullback of ``vol_{S^2} / 4`` with its outward orientation.
    """
    return _hopf(_as_s3_point(x))


def _hopf(x):
    a, b = x
    w = 2.0 * np.conj(a) * b
    return np.array([w.real, w.imag, abs(a) ** 2 - abs(b) ** 2])


def hopf_jacobian(x):
    """Real 3x4 Jacobian of :func:`hopf_map` with respect to ``(Re a, Re b, Im a, Im b)``.

    Columns follow the realification order used by :func:`tangent_basis`, so
    ``hopf_jacobian(x) @ realify(v)`` is the pushforward of ``v``.
    """
    return _hopf_jacobian(_as_s3_point(x))


def _hopf_jacobian(x):
    a, b = x
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag
    # 2 conj(a) b = 2[(ar br + ai bi) + i (ar bi - ai br)]
    return 2.0 * np.array(
        [
            [br, ar, bi, ai],
            [bi, -ai, -br, ar],
            [ar, -br, ai, -bi],
        ]
    )


def hopf_pushforward(x, v):
    v = as_vector(v, "v")
    return hopf_jacobian(x) @ _realify(v)


def monopole_form(p, a, b, tol=1e-10):
    """``x dy^dz + y dz^dx + z dx^dy`` at ``p`` on ``(a, b)``: the determinant ``det[p a b]``."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if abs(np.linalg.norm(p) - 1.0) > STRUCTURAL_TOL:
        raise InvariantViolation("p is not on the unit sphere")
    for name, u in (("a", a), ("b", b)):
        if abs(np.dot(p, u)) > tol * max(1.0, np.linalg.norm(u)):
            raise InvariantViolation(f"{name} is not tangent to S^2 at p")
    return float(np.dot(p, np.cross(a, b)))


def integrate_s2(two_form, n_cos=64, n_phi=128):
    """Integrate a 2-form over the outward-oriented unit sphere.

    ``two_form(p, a, b)`` is evaluated on the coordinate frame of
    ``(phi, u = cos theta)``; Gauss-Legendre in ``u`` times the trapezoid rule
    in ``phi``.
    """
    u, wu = roots_legendre(n_cos)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2 * np.pi / n_phi
    total = 0.0
    for uk, wk in zip(u, wu):
        r = np.sqrt(1.0 - uk * uk)
        for ph in phi:
            c, s = np.cos(ph), np.sin(ph)
            p = np.array([r * c, r * s, uk])
            d_phi = np.array([-r * s, r * c, 0.0])
            d_u = np.array([-uk / r * c, -uk / r * s, 1.0])
            total += wk * wphi * two_form(p, d_phi, d_u)
    return total


def monopole_flux(n_cos=64, n_phi=128):
    return integrate_s2(monopole_form, n_cos, n_phi)


def hopf_pullback_check(x, v, w):
    """``(d theta(v, w), vol_{S^2}(Dp v, Dp w) / 4)`` at ``x`` in S^3."""
    x = _as_s3_point(x)
    lhs = dtheta(x, v, w)
    p = hopf_map(x)
    rhs = 0.25 * monopole_form(p, hopf_pushforward(x, v), hopf_pushforward(x, w))
    return lhs, rhs
