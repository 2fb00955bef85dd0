"""Error types, tolerance constants and input validation shared by all modules."""

import numpy as np

# structural invariants (Hermitianity, unitarity, unit norm), relative
STRUCTURAL_TOL = 1e-12
# identities that go through an eigendecomposition or a long product chain
SPECTRAL_TOL = 1e-10
# identities involving numerical differentiation
DIFFERENTIAL_TOL = 1e-8


class ContactifyError(ValueError):
    """Base class for domain errors; ``code`` is the stable CLI error code."""

    code = "domain_error"


class DimensionMismatch(ContactifyError):
    code = "dimension_mismatch"


class InvariantViolation(ContactifyError):
    code = "invariant_violation"


class AmbiguityError(ContactifyError):
    code = "ambiguous"


class StepRejected(ContactifyError):
    code = "step_rejected"


def _scale(a):
    return max(float(np.linalg.norm(a)), 1.0)


def as_square(a, name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    return a


def as_hermitian(a, name="A", tol=STRUCTURAL_TOL):
    a = as_square(a, name)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol * _scale(a):
        raise InvariantViolation(f"{name} is not Hermitian (deviation {dev:.3e})")
    return a


def as_antihermitian(t, name="T", tol=STRUCTURAL_TOL):
    t = as_square(t, name)
    dev = np.max(np.abs(t + t.conj().T))
    if dev > tol * _scale(t):
        raise InvariantViolation(f"{name} is not anti-Hermitian (deviation {dev:.3e})")
    return t


def as_unitary(u, name="U", tol=STRUCTURAL_TOL):
    u = as_square(u, name)
    n = u.shape[0]
    dev = np.max(np.abs(u @ u.conj().T - np.eye(n)))
    if dev > tol * n:
        raise InvariantViolation(f"{name} is not unitary (deviation {dev:.3e})")
    return u


def same_dim(*mats):
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def as_vector(x, name="x"):
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty vector, got shape {x.shape}")
    return x


def as_sphere_point(x, name="x", tol=STRUCTURAL_TOL):
    x = as_vector(x, name)
    err = abs(np.linalg.norm(x) - 1.0)
    if err > tol:
        raise InvariantViolation(f"{name} is not a unit vector (| |x| - 1 | = {err:.3e})")
    return x


def check_tangent(x, v, name="v", tol=STRUCTURAL_TOL):
    """Validate that ``v`` is real-tangent to the unit sphere at ``x``: Re<x|v> = 0."""
    v = as_vector(v, name)
    if v.shape != x.shape:
        raise DimensionMismatch(f"{name} has {v.size} components, point has {x.size}")
    g = np.real(np.vdot(x, v))
    if abs(g) > tol * max(1.0, float(np.linalg.norm(v))):
        raise InvariantViolation(f"{name} is not tangent to the sphere (Re<x|{name}> = {g:.3e})")
    return v


def check_pairing_scale(scale):
    if scale not in (0.5, 1, 1.0):
        raise ContactifyError(f"pairing scale must be 1/2 or 1, got {scale!r}")
    return float(scale)
