"""Coadjoint orbits of U(n): isotropy algebras, the KKS form and the reduction identities."""

from dataclasses import dataclass, field

import numpy as np

from ._checks import (
    AmbiguityError,
    InvariantViolation,
    as_antihermitian,
    as_hermitian,
    as_sphere_point,
    as_vector,
    check_tangent,
    same_dim,
)
from .lie import (
    adjoint_action,
    coadjoint_action,
    commutator,
    matrix_exp,
    pairing,
    u_basis,
)

# eigenvalues closer than MERGE_TOL * |mu| form one block; gaps below
# AMBIGUOUS_TOL * |mu| (but above MERGE_TOL) are refused
MERGE_TOL = 1e-8
AMBIGUOUS_TOL = 1e-6
KERNEL_RTOL = 1e-10


def cluster_spectrum(mu):
    """Group the eigenvalues of ``mu`` into blocks of equal value.

    Returns ``(values, multiplicities)`` with ``values`` increasing (each the
    mean of its cluster).
    """
    mu = as_hermitian(mu, "mu")
    lam = np.linalg.eigvalsh(mu)
    scale = float(np.max(np.abs(lam)))
    groups = [[lam[0]]]
    for prev, cur in zip(lam[:-1], lam[1:]):
        gap = cur - prev
        if gap <= MERGE_TOL * scale:
            groups[-1].append(cur)
        elif gap < AMBIGUOUS_TOL * scale:
            raise AmbiguityError(
                f"eigenvalues {prev!r} and {cur!r} are neither equal nor separated "
                f"(gap {gap:.3e}, relative {gap / scale:.3e})"
            )
        else:
            groups.append([cur])
    return [float(np.mean(g)) for g in groups], [len(g) for g in groups]


@dataclass(frozen=True)
class IsotropyBasis:
    """Orthonormal basis of the isotropy algebra ``{T in u(n) : [mu, T] = 0}``.

    ``complement`` spans the orthogonal complement, which the map
    ``T -> [mu, T]`` sends isomorphically onto the orbit tangent space.
    """

    mu: np.ndarray
    basis: list
    dim: int
    spectrum: list
    multiplicities: list
    complement: list = field(repr=False)

    @property
    def orbit_dim(self):
        n = self.mu.shape[0]
        return n * n - self.dim


def _bracket_matrix(mu, basis):
    cols = []
    for b in basis:
        c = commutator(mu, b)
        cols.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
    return np.array(cols).T


def isotropy_algebra(mu):
    """Kernel of ``T -> [mu, T]`` on u(n), extracted by SVD and checked against
    the block formula ``sum d_j**2``."""
    mu = as_hermitian(mu, "mu")
    n = mu.shape[0]
    values, mults = cluster_spectrum(mu)
    dim = sum(d * d for d in mults)

    basis = u_basis(n)
    M = _bracket_matrix(mu, basis)
    _, s, vh = np.linalg.svd(M)
    s = np.concatenate([s, np.zeros(n * n - s.size)])
    scale = max(abs(v) for v in values)
    threshold = max(KERNEL_RTOL * s[0], 2 * MERGE_TOL * scale)
    kept = s[n * n - dim:]
    if kept.size and kept.max() > threshold:
        raise InvariantViolation(
            f"isotropy kernel of expected dimension {dim} has singular value {kept.max():.3e}"
        )
    if dim < n * n and s[n * n - dim - 1] <= threshold:
        raise InvariantViolation(
            f"bracket map has more than {dim} small singular values; block count disagrees"
        )
    B = np.array(basis)
    kernel = [np.tensordot(row, B, axes=1) for row in vh[n * n - dim:]]
    comp = [np.tensordot(row, B, axes=1) for row in vh[: n * n - dim]]
    return IsotropyBasis(mu, kernel, dim, values, mults, comp)


def kks_form(mu, X, Y, scale):
    """KKS form on the orbit through ``mu`` evaluated on the tangent vectors
    generated by ``X`` and ``Y``: ``<mu, [X, Y]>``."""
    X = as_antihermitian(X, "X")
    Y = as_antihermitian(Y, "Y")
    same_dim(X, Y)
    return pairing(mu, commutator(X, Y), scale)


def kks_pure_state(x, y, y2):
    """KKS form at the pure state ``|x><x|`` in sphere variables: ``Im<y|y2>``."""
    x = as_sphere_point(x)
    y = check_tangent(x, y, "y")
    y2 = check_tangent(x, y2, "y2")
    return float(np.imag(np.vdot(y, y2)))


def generator_for(x, y):
    """An anti-Hermitian ``T`` with ``T x = y`` for unit ``x`` and tangent ``y``.

    ``|y><x| - |x><y|`` maps ``x`` to ``y - <y|x> x``; the term ``<y|x> |x><x|``
    restores the missing component and is anti-Hermitian because ``<y|x>`` is
    purely imaginary for tangent ``y``.
    """
    x = as_sphere_point(x)
    y = check_tangent(x, y, "y")
    T = np.outer(y, x.conj()) - np.outer(x, y.conj()) + np.vdot(y, x) * np.outer(x, x.conj())
    return as_antihermitian(T, "T_xy")


def moment_map(x):
    """``|x><x|``; no unit-norm requirement."""
    x = as_vector(x)
    return np.outer(x, x.conj())


def cotangent_symplectic(mu, v, sigma, v2, sigma2, scale):
    """Canonical symplectic form of T*U(n) in space coordinates at ``(g, mu)``:
    ``<sigma, v2> - <sigma2, v> + <mu, [v, v2]>``."""
    v = as_antihermitian(v, "v")
    v2 = as_antihermitian(v2, "v2")
    same_dim(mu, v, sigma, v2, sigma2)
    return (
        pairing(sigma, v2, scale)
        - pairing(sigma2, v, scale)
        + pairing(mu, commutator(v, v2), scale)
    )


def reduced_form_pullback_check(mu, g, v, v2, scale):
    """Both sides of the pullback of the KKS form along ``[g] -> Ad*_g mu``.

    Returns ``(lhs, rhs)`` where ``lhs`` is the KKS form at ``Ad*_g(mu)`` on the
    generators ``Ad_g(v), Ad_g(v2)`` and ``rhs = <mu, [v, v2]>``.
    """
    mu = as_hermitian(mu, "mu")
    same_dim(mu, g, v, v2)
    lhs = kks_form(coadjoint_action(g, mu), adjoint_action(g, v), adjoint_action(g, v2), scale)
    rhs = pairing(mu, commutator(v, v2), scale)
    return lhs, rhs


def coadjoint_flow_linear(T, mu0, t):
    """Exact flow ``exp(tT) mu0 exp(-tT)`` of the field ``mu -> [T, mu]``."""
    T = as_antihermitian(T)
    mu0 = as_hermitian(mu0, "mu0")
    same_dim(T, mu0)
    return coadjoint_action(matrix_exp(t * T), mu0)


def orbit_info(mu):
    """Summary used by the ``orbit-info`` command."""
    iso = isotropy_algebra(mu)
    return {
        "spectrum": iso.spectrum,
        "multiplicities": iso.multiplicities,
        "isotropy_dim": iso.dim,
        "orbit_dim": iso.orbit_dim,
    }
