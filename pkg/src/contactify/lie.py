"""Matrix Lie algebra calculus for u(n) and its dual u*(n).

Hermitian matrices play the role of covectors (elements of u*), anti-Hermitian
matrices are Lie algebra elements. Everything operates on plain complex
``numpy`` arrays and validates its inputs.

The pairing normalization is never global: callers pass ``scale`` explicitly,
``0.5`` for the ``(i/2) tr`` convention used with orbits and spheres and ``1``
for the ``i tr`` convention used in the integrality computations.
"""

import numpy as np

from ._checks import (
    InvariantViolation,
    SPECTRAL_TOL,
    STRUCTURAL_TOL,
    as_antihermitian,
    as_hermitian,
    as_unitary,
    check_pairing_scale,
    same_dim,
)

HALF = 0.5
ONE = 1.0


def commutator(a, b):
    return a @ b - b @ a


def pairing(A, T, scale):
    """Return ``scale * i tr(A T)`` for Hermitian ``A`` and anti-Hermitian ``T``.

    ``i tr(AT)`` is real for such inputs; an imaginary residue above tolerance
    means one of the arguments had the wrong symmetry and raises.
    """
    scale = check_pairing_scale(scale)
    A = as_hermitian(A, "A")
    T = as_antihermitian(T, "T")
    same_dim(A, T)
    val = 1j * np.trace(A @ T)
    bound = STRUCTURAL_TOL * max(1.0, np.linalg.norm(A) * np.linalg.norm(T))
    if abs(val.imag) > bound:
        raise InvariantViolation(f"pairing has imaginary residue {val.imag:.3e}")
    return scale * float(val.real)


def dual_bracket(A, B):
    """Lie bracket on u*: ``-i (AB - BA)``."""
    A = as_hermitian(A, "A")
    B = as_hermitian(B, "B")
    same_dim(A, B)
    return as_hermitian(-1j * commutator(A, B), "[A,B]")


def adjoint_action(U, T):
    U = as_unitary(U)
    T = as_antihermitian(T)
    same_dim(U, T)
    return U @ T @ U.conj().T


def coadjoint_action(U, A):
    """``U A U^dagger``; the spectrum is preserved and checked."""
    U = as_unitary(U)
    A = as_hermitian(A)
    same_dim(U, A)
    out = U @ A @ U.conj().T
    before = np.linalg.eigvalsh(A)
    after = np.linalg.eigvalsh(out)
    dev = np.max(np.abs(before - after))
    if dev > SPECTRAL_TOL * max(1.0, np.max(np.abs(before))):
        raise InvariantViolation(f"coadjoint action moved the spectrum by {dev:.3e}")
    return as_hermitian(out, "Ad*_U(A)")


def coadjoint_infinitesimal(T, mu):
    """Tangent vector to the orbit of ``mu`` generated by ``T``: ``mu T - T mu``."""
    T = as_antihermitian(T)
    mu = as_hermitian(mu, "mu")
    same_dim(T, mu)
    return as_hermitian(commutator(mu, T), "[mu,T]")


def hamiltonian_field_dual(T, mu):
    """Hamiltonian vector field of the linear function ``F_T`` at ``mu``: ``T mu - mu T``."""
    T = as_antihermitian(T)
    mu = as_hermitian(mu, "mu")
    same_dim(T, mu)
    return as_hermitian(commutator(T, mu), "[T,mu]")


def matrix_exp(T):
    """Exponential of an anti-Hermitian matrix by diagonalizing the Hermitian ``iT``.

    With ``iT = V diag(d) V^dagger`` we get ``exp(T) = V diag(exp(-i d)) V^dagger``,
    which is unitary to working precision.
    """
    T = as_antihermitian(T)
    H = 1j * T
    H = 0.5 * (H + H.conj().T)
    d, V = np.linalg.eigh(H)
    return as_unitary((V * np.exp(-1j * d)) @ V.conj().T, "exp(T)")


def lie_metric(T, S):
    """Invariant inner product ``-tr(T S) / 2`` on u(n)."""
    return float(np.real(-0.5 * np.trace(T @ S)))


def u_basis(n):
    """Real orthonormal basis of u(n) under :func:`lie_metric`.

    Order: ``sqrt(2) i E_kk`` for each k, then for each pair k < l the real
    antisymmetric ``E_kl - E_lk`` and the imaginary symmetric ``i (E_kl + E_lk)``.
    """
    basis = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = np.sqrt(2.0) * 1j
        basis.append(e)
    for k in range(n):
        for l in range(k + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[k, l], a[l, k] = 1.0, -1.0
            s = np.zeros((n, n), dtype=complex)
            s[k, l] = s[l, k] = 1j
            basis.extend((a, s))
    return basis


def u_coordinates(T, basis=None):
    T = as_antihermitian(T)
    basis = u_basis(T.shape[0]) if basis is None else basis
    return np.array([lie_metric(T, b) for b in basis])


def from_u_coordinates(coeffs, basis):
    return np.tensordot(np.asarray(coeffs, dtype=float), np.array(basis), axes=1)
