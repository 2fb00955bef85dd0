"""Exact decision procedures for the integrality of coadjoint orbits of U(n).

All decisions are made in exact rational arithmetic (``fractions.Fraction``).
Floating-point input is accepted only through :func:`rationalize`, which either
finds a short continued-fraction convergent or refuses.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from ._checks import ContactifyError, DimensionMismatch, InvariantViolation, as_hermitian
from .lie import pairing
from .orbit import cluster_spectrum, isotropy_algebra

RATIONALIZE_RTOL = 1e-9
MAX_DENOMINATOR = 10**6


class NotRational(ContactifyError):
    code = "not_rational"


def as_fraction(value):
    """Coerce ints, Fractions, ``(num, den)`` pairs and decimal strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ContactifyError(f"rational must be a [num, den] pair, got {value!r}")
        num, den = (int(v) for v in value)
        if den <= 0:
            raise ContactifyError(f"denominator must be positive, got {den}")
        return Fraction(num, den)
    if isinstance(value, float):
        raise ContactifyError("floats are not exact; use rationalize()")
    return Fraction(value)


def rationalize(x, rtol=RATIONALIZE_RTOL, max_denominator=MAX_DENOMINATOR):
    """First continued-fraction convergent of ``x`` within relative tolerance ``rtol``.

    Raises :class:`NotRational` when no convergent with denominator at most
    ``max_denominator`` is close enough.
    """
    x = float(x)
    if not np.isfinite(x):
        raise NotRational(f"cannot rationalize {x!r}")
    if x == 0.0:
        return Fraction(0)
    target = Fraction(x)
    tol = rtol * abs(x)
    # convergents h/k of the continued fraction of target
    h0, h1, k0, k1 = 0, 1, 1, 0
    rest = target
    while True:
        a = rest.numerator // rest.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_denominator:
            break
        approx = Fraction(h1, k1)
        if abs(float(approx - target)) <= tol:
            return approx
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    raise NotRational(f"{x!r} has no rational approximation with denominator <= {max_denominator}")


@dataclass(frozen=True)
class SpectralBlocks:
    """Distinct eigenvalues (increasing) with their multiplicities."""

    lambdas: tuple
    multiplicities: tuple

    @property
    def n(self):
        return sum(self.multiplicities)

    @property
    def trace(self):
        return sum((lam * d for lam, d in zip(self.lambdas, self.multiplicities)), Fraction(0))

    def to_matrix(self):
        diag = np.repeat([float(v) for v in self.lambdas], self.multiplicities)
        return np.diag(diag).astype(complex)


def spectral_blocks(pairs):
    """Validate and sort ``[(eigenvalue, multiplicity), ...]``."""
    pairs = list(pairs)
    if not pairs:
        raise ContactifyError("spectrum must be non-empty")
    seen = {}
    for value, mult in pairs:
        lam = as_fraction(value)
        if int(mult) != mult or mult <= 0:
            raise ContactifyError(f"multiplicity must be a positive integer, got {mult!r}")
        if lam in seen:
            raise ContactifyError(f"duplicate eigenvalue {lam}; merge it into one block")
        seen[lam] = int(mult)
    lambdas = tuple(sorted(seen))
    return SpectralBlocks(lambdas, tuple(seen[lam] for lam in lambdas))


def blocks_from_matrix(mu):
    """Cluster the spectrum of a floating Hermitian matrix and rationalize each block."""
    values, mults = cluster_spectrum(mu)
    return spectral_blocks([(rationalize(v), d) for v, d in zip(values, mults)])


def rational_gcd(values):
    """Positive generator of the subgroup of Q generated by ``values``, or None if all vanish."""
    nonzero = [as_fraction(v) for v in values if v != 0]
    if not nonzero:
        return None
    num = 0
    den = 1
    for v in nonzero:
        num = gcd(num, abs(v.numerator))
        den = lcm(den, v.denominator)
    return Fraction(num, den)


def hbar_generator(blocks):
    """The positive ``hbar`` with ``{lambda_j}`` generating ``hbar Z``; None for the zero spectrum."""
    return rational_gcd(blocks.lambdas)


def quantum_state_identity(blocks, hbar):
    """Check ``1/hbar == sum_j (lambda_j/hbar) d_j`` for a nonnegative spectrum.

    The identity holds exactly when the trace is 1, i.e. when the matrix is a
    density matrix.
    """
    if any(lam < 0 for lam in blocks.lambdas):
        raise ContactifyError("negative eigenvalue: not a quantum state")
    hbar = as_fraction(hbar)
    quotients = [lam / hbar for lam in blocks.lambdas]
    if any(q.denominator != 1 for q in quotients):
        raise InvariantViolation(f"{hbar} does not divide the spectrum")
    lhs = 1 / hbar
    rhs = sum((q * d for q, d in zip(quotients, blocks.multiplicities)), Fraction(0))
    holds = lhs == rhs
    if holds != (blocks.trace == 1):
        raise InvariantViolation("state identity disagrees with the trace condition")
    return holds


def _exact_rank(rows):
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class RationalLattice:
    """Full-rank lattice ``2 pi * span_Z(generators)`` in R^dim.

    Generators are stored in units of ``2 pi``, so the rational entries are
    exact while the period of the exponential map stays explicit.
    """

    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(as_fraction(v) for v in g) for g in self.generators)
        if not gens:
            raise ContactifyError("lattice needs at least one generator")
        dim = len(gens[0])
        if any(len(g) != dim for g in gens) or len(gens) != dim:
            raise DimensionMismatch("lattice needs exactly dim generators of length dim")
        if _exact_rank(gens) != dim:
            raise ContactifyError("lattice generators are linearly dependent")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self):
        return len(self.generators)

    @classmethod
    def standard(cls, dim):
        return cls(tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))


def lattice_mu_check(lattice, mu):
    """Decide whether ``mu`` takes values in ``2 pi hbar Z`` on the lattice.

    Returns ``(True, hbar)`` with ``hbar`` the largest such value, or
    ``(True, None)`` when ``mu`` vanishes on the lattice. Rational input always
    passes; ``False`` is reserved for inputs that cannot be represented here.
    """
    mu = tuple(as_fraction(v) for v in mu)
    if len(mu) != lattice.dim:
        raise DimensionMismatch(f"mu has {len(mu)} entries, lattice has dimension {lattice.dim}")
    # values of mu on the generators, in units of 2 pi
    values = [sum((m * g for m, g in zip(mu, gen)), Fraction(0)) for gen in lattice.generators]
    return True, rational_gcd(values)


def isotropy_zero_basis(mu, scale):
    """Orthonormal basis of ``{T in g_mu : <mu, T> = 0}``, one dimension below ``g_mu``."""
    mu = as_hermitian(mu, "mu")
    iso = isotropy_algebra(mu)
    f = np.array([pairing(mu, b, scale) for b in iso.basis])
    norm = np.linalg.norm(f)
    if norm <= 1e-12 * max(1.0, np.linalg.norm(mu)):
        raise ContactifyError("codimension-0: mu vanishes on its whole isotropy algebra")
    # orthonormal complement of f inside the coefficient space
    _, _, vh = np.linalg.svd(f[None, :])
    B = np.array(iso.basis)
    out = [np.tensordot(row, B, axes=1) for row in vh[1:]]
    if len(out) != iso.dim - 1:
        raise InvariantViolation("isotropy zero algebra is not of codimension 1")
    return out


@dataclass(frozen=True)
class IntegralityReport:
    integral: bool
    hbar: Fraction | None
    blocks: SpectralBlocks
    isotropy_dim: int
    isotropy_zero_dim: int
    contactification_dim: int
    orbit_dim: int
    is_quantum_state: bool
    state_identity_holds: bool | None

    def to_dict(self):
        def frac(q):
            return None if q is None else [str(q.numerator), str(q.denominator)]

        return {
            "integral": self.integral,
            "hbar": frac(self.hbar),
            "eigenvalues": [frac(q) for q in self.blocks.lambdas],
            "multiplicities": list(self.blocks.multiplicities),
            "n": self.blocks.n,
            "isotropy_dim": self.isotropy_dim,
            "isotropy_zero_dim": self.isotropy_zero_dim,
            "orbit_dim": self.orbit_dim,
            "contactification_dim": self.contactification_dim,
            "is_quantum_state": self.is_quantum_state,
            "state_identity_holds": self.state_identity_holds,
        }


def build_report(blocks):
    """Integrality verdict and dimension bookkeeping for the orbit with spectrum ``blocks``.

    The zero matrix has no contactification (its orbit is a point and ``mu``
    vanishes on the whole isotropy algebra); it is reported as non-integral
    with ``isotropy_zero_dim == isotropy_dim``.
    """
    n = blocks.n
    iso = sum(d * d for d in blocks.multiplicities)
    hbar = hbar_generator(blocks)
    integral = hbar is not None
    iso0 = iso - 1 if integral else iso
    nonneg = all(lam >= 0 for lam in blocks.lambdas)
    state_identity = quantum_state_identity(blocks, hbar) if (nonneg and integral) else None
    return IntegralityReport(
        integral=integral,
        hbar=hbar,
        blocks=blocks,
        isotropy_dim=iso,
        isotropy_zero_dim=iso0,
        contactification_dim=n * n - iso0,
        orbit_dim=n * n - iso,
        is_quantum_state=nonneg and blocks.trace == 1,
        state_identity_holds=state_identity,
    )
