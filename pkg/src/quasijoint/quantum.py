"""Quantum-domain objects: observables, spin representations, density states.

States carry a canonical real coordinate vector of length N^2 - 1 (leading
diagonal entries first, then Re/Im pairs of the lower-triangle entries in
row-major order of the pairs), used by the tomography code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    DomainError,
    LengthMismatchError,
    NonRealExpectationError,
)


class HermitianObservable:
    """Hermitian matrix with a lazily cached spectral decomposition."""

    def __init__(
        self,
        matrix,
        label: str = "A",
        hermiticity_tol: float = 1e-10,
        degeneracy_tol: float = linalg.DEFAULT_DEGENERACY_TOL,
    ):
        m = linalg.require_hermitian(matrix, hermiticity_tol, name=label)
        m.setflags(write=False)
        self.matrix = m
        self.label = label
        self._degeneracy_tol = degeneracy_tol

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eig(self) -> linalg.EigenSystem:
        return linalg.eigensystem(self.matrix, self._degeneracy_tol)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Distinct eigenvalues, descending."""
        return self.eig.eigenvalues

    def exp_factor(self, scale: float) -> np.ndarray:
        """exp(-1j * scale * A) through the cached eigensystem."""
        return linalg.phase_exponential(self.eig, scale)

    def __repr__(self):
        return f"HermitianObservable({self.label!r}, dim={self.dim})"


class DensityState:
    """Density matrix: Hermitian, unit trace, positive semidefinite.

    ``require_positive=False`` skips the positivity check; the coordinate
    basis elements used by the tomography map are Hermitian with unit trace
    but not positive.
    """

    def __init__(
        self,
        matrix,
        *,
        require_positive: bool = True,
        atol: float = 1e-10,
        positivity_slack: float = 1e-9,
    ):
        m = linalg.require_hermitian(matrix, atol, name="density matrix")
        trace = m.trace().real
        if abs(trace - 1.0) > atol:
            raise DomainError(f"density matrix trace must be 1, got {trace:.12g}")
        if require_positive:
            smallest = float(np.linalg.eigvalsh(m).min())
            if smallest < -positivity_slack:
                raise DomainError(
                    f"density matrix has eigenvalue {smallest:.3e} below -{positivity_slack:.1e}"
                )
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, ket) -> "DensityState":
        """Projector onto a (normalized copy of a) state vector."""
        v = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DomainError("state vector must be nonzero")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityState":
        return cls(np.eye(dim) / dim)

    def __repr__(self):
        return f"DensityState(dim={self.dim})"


@dataclass(frozen=True)
class SpinTriple:
    """The three spin components in the (j_times_two + 1)-dimensional irrep."""

    j_times_two: int
    j1: HermitianObservable
    j2: HermitianObservable
    j3: HermitianObservable

    @property
    def j(self) -> float:
        return self.j_times_two / 2

    @property
    def dim(self) -> int:
        return self.j_times_two + 1

    @property
    def components(self):
        return (self.j1, self.j2, self.j3)

    def casimir(self) -> np.ndarray:
        """J1^2 + J2^2 + J3^2, which equals j(j+1) times the identity."""
        return sum(c.matrix @ c.matrix for c in self.components)


def spin_operators(j_times_two: int) -> SpinTriple:
    """Spin matrices for the irreducible representation with j = j_times_two/2.

    The z component is diagonal with entries j, j-1, ..., -j; the x and y
    components come from the standard raising/lowering construction.
    """
    if j_times_two < 1:
        raise DomainError(f"j_times_two must be at least 1, got {j_times_two}")
    n = j_times_two + 1
    j = j_times_two / 2
    m = j - np.arange(n)  # magnetic quantum numbers, descending
    raising = np.zeros((n, n), dtype=complex)
    amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    raising[np.arange(n - 1), np.arange(1, n)] = amp
    lowering = raising.conj().T
    jx = (raising + lowering) / 2
    jy = (raising - lowering) / 2j
    jz = np.diag(m).astype(complex)
    tag = f"(j={j_times_two}/2)" if j_times_two % 2 else f"(j={j_times_two // 2})"
    return SpinTriple(
        j_times_two,
        HermitianObservable(jx, "J1" + tag),
        HermitianObservable(jy, "J2" + tag),
        HermitianObservable(jz, "J3" + tag),
    )


def bloch_state(theta: float, phi: float, m: float = 1.0) -> DensityState:
    """Two-level state at polar angle theta and azimuth phi.

    ``m`` mixes the antipodal pure states: m=1 gives the pure state at
    (theta, phi), m=1/2 lands in the equatorial plane of the Bloch ball.
    """
    if not 0.0 <= theta <= np.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    if not 0.0 <= phi < 2 * np.pi:
        raise DomainError(f"phi must lie in [0, 2*pi), got {phi}")
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"m must lie in [0, 1], got {m}")
    r = 2 * m - 1
    off = np.exp(-1j * phi) * np.sin(theta)
    rho = 0.5 * np.array(
        [
            [1 + r * np.cos(theta), off],
            [off.conjugate(), 1 - r * np.cos(theta)],
        ]
    )
    return DensityState(rho)


def parametrize(rho: DensityState) -> np.ndarray:
    """Canonical real coordinates of a density matrix, length N^2 - 1.

    Order: the first N-1 diagonal entries, then for each index pair i < j
    in row-major order the real and imaginary part of the lower-triangle
    entry rho[j, i].
    """
    m = rho.matrix
    n = rho.dim
    out = np.empty(n * n - 1)
    out[: n - 1] = np.diag(m).real[: n - 1]
    k = n - 1
    for i in range(n):
        for j in range(i + 1, n):
            out[k] = m[j, i].real
            out[k + 1] = m[j, i].imag
            k += 2
    return out


def embed(values, dim: int, *, require_positive: bool = False) -> DensityState:
    """Inverse of ``parametrize``; the last diagonal entry absorbs the trace.

    Positivity is not checked by default: the map is the linear coordinate
    chart, and coordinate basis elements are not physical states.
    """
    v = np.asarray(values, dtype=float)
    if v.shape != (dim * dim - 1,):
        raise LengthMismatchError(
            f"expected {dim * dim - 1} coordinates for dim {dim}, got shape {v.shape}"
        )
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - 1):
        m[i, i] = v[i]
    m[dim - 1, dim - 1] = 1.0 - v[: dim - 1].sum()
    k = dim - 1
    for i in range(dim):
        for j in range(i + 1, dim):
            m[j, i] = v[k] + 1j * v[k + 1]
            m[i, j] = v[k] - 1j * v[k + 1]
            k += 2
    return DensityState(m, require_positive=require_positive)


def expectation(observable: HermitianObservable, rho: DensityState) -> float:
    """Tr[A rho], checked to be real."""
    if observable.dim != rho.dim:
        raise DimensionMismatchError(
            f"observable dim {observable.dim} vs state dim {rho.dim}"
        )
    value = complex(np.trace(observable.matrix @ rho.matrix))
    if abs(value.imag) > 1e-10:
        raise NonRealExpectationError(
            f"expectation has imaginary part {value.imag:.3e}"
        )
    return value.real


def random_density(dim: int, rng: np.random.Generator) -> DensityState:
    """Random full-rank state: normalized G G^dagger with G complex Ginibre."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityState(m / m.trace().real)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix with independent Gaussian entries."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2
