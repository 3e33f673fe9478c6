"""Quasi-joint distributions of non-commuting observables.

A scheme fixes how the one-parameter unitary groups exp(-i s_k A_k) are
mixed into one operator-valued function of the frequency vector s. For
finite products of exponentials the Fourier inversion of that function
concentrates on finitely many operator atoms, computed here exactly from
the spectral decompositions (no grids, no FFT): every factor
exp(-i s c A) expands over the eigenprojectors of A, so a word contributes
one ordered projector product per choice of eigenvalues, located at the
coordinate vector of coefficient-weighted eigenvalue sums.

Pairing atoms with a state by the trace gives the (generally complex)
joint weights; integrating a classical function against the atoms gives
the matching operator quantization. Both sides of that duality live here.

Conventions: no 2*pi factors are materialized anywhere; normalization is
fixed by requiring the weights to sum to one, i.e. the mixture reduces to
the identity at s = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    DomainError,
    QuasiJointError,
    UnsupportedSchemeError,
)
from .quantum import DensityState, HermitianObservable

DEFAULT_MERGE_TOL = 1e-9
DEFAULT_PRUNE_TOL = 1e-12
NORMALIZATION_TOL = 1e-12


class Factor(NamedTuple):
    """One exponential factor exp(-i s[var] * coeff * A[obs]) inside a word."""

    var: int
    coeff: float
    obs: int


@dataclass(frozen=True)
class SchemeSpec:
    """Convex mixture of product words of observable exponentials.

    ``terms`` is a sequence of (weight, word) pairs where each word is a
    sequence of :class:`Factor`. Two normalization constraints make the
    mixture a valid quasi-classicalization: the weights sum to one (the
    mixture is the identity at s = 0) and, within every term, the
    coefficients attached to each variable sum to one (freezing all other
    variables reduces the word to the plain exponential of one observable,
    which pins the marginals to the Born distributions).
    """

    n_vars: int
    terms: tuple
    label: str = "custom"
    approximate: bool = False

    def __post_init__(self):
        if self.n_vars < 1:
            raise DomainError(f"n_vars must be at least 1, got {self.n_vars}")
        terms = []
        for weight, word in self.terms:
            factors = tuple(Factor(int(v), float(c), int(o)) for v, c, o in word)
            for f in factors:
                if not 0 <= f.var < self.n_vars:
                    raise DomainError(f"factor var index {f.var} out of range")
                if not 0 <= f.obs < self.n_vars:
                    raise DomainError(f"factor obs index {f.obs} out of range")
            terms.append((complex(weight), factors))
        object.__setattr__(self, "terms", tuple(terms))

        total = sum(w for w, _ in self.terms)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"term weights must sum to 1, got {total}")
        for t_idx, (_, word) in enumerate(self.terms):
            sums = np.zeros(self.n_vars)
            for f in word:
                sums[f.var] += f.coeff
            bad = np.abs(sums - 1.0) > NORMALIZATION_TOL
            if bad.any():
                raise DomainError(
                    f"term {t_idx}: coefficients per variable must sum to 1, got {sums.tolist()}"
                )

    def hashed_operator_batch(self, observables, s_points) -> np.ndarray:
        """Mixture of exponential products at each frequency vector.

        Returns an array of shape (len(s_points), N, N).
        """
        pts = _check_points(self.n_vars, s_points)
        _check_observables(self.n_vars, observables)
        dim = observables[0].dim
        out = np.zeros((pts.shape[0], dim, dim), dtype=complex)
        for weight, word in self.terms:
            acc = None
            for f in word:
                u = _batch_phase_exponential(
                    observables[f.obs].eig, pts[:, f.var] * f.coeff
                )
                acc = u if acc is None else acc @ u
            if acc is None:
                acc = np.broadcast_to(np.eye(dim, dtype=complex), out.shape)
            out += weight * acc
        return out

    def hashed_operator(self, observables, s) -> np.ndarray:
        """Single-point version of :meth:`hashed_operator_batch`."""
        return self.hashed_operator_batch(observables, np.atleast_2d(s))[0]


@dataclass(frozen=True)
class WignerScheme:
    """Symmetric (Weyl) mixing: one exponential of the linear combination.

    For generic non-commuting observables this scheme has no finite atom
    decomposition, and its density can fail to exist as a function; only
    the characteristic-function side is exact. See
    :func:`wigner_density_estimate` for a windowed, explicitly approximate
    inversion.
    """

    n_vars: int = 2
    label: str = "wigner"

    def hashed_operator_batch(self, observables, s_points) -> np.ndarray:
        pts = _check_points(self.n_vars, s_points)
        _check_observables(self.n_vars, observables)
        stack = np.stack([o.matrix for o in observables])
        h = np.einsum("mv,vij->mij", pts, stack)
        vals, vecs = np.linalg.eigh(h)
        phases = np.exp(-1j * vals)
        return np.einsum("mik,mk,mjk->mij", vecs, phases, vecs.conj())

    def hashed_operator(self, observables, s) -> np.ndarray:
        return self.hashed_operator_batch(observables, np.atleast_2d(s))[0]


def scheme_kirkwood(n_vars: int = 2) -> SchemeSpec:
    """Fully ordered product word: one factor per variable, ascending."""
    word = [Factor(v, 1.0, v) for v in range(n_vars)]
    return SchemeSpec(n_vars, ((1.0, word),), label="kirkwood")


def scheme_s_alpha(alpha: float) -> SchemeSpec:
    """Split first-observable word: exp(-i a s A) exp(-i t B) exp(-i (1-a) s A)."""
    word = [Factor(0, float(alpha), 0), Factor(1, 1.0, 1), Factor(0, 1.0 - float(alpha), 0)]
    return SchemeSpec(2, ((1.0, word),), label=f"s_alpha({alpha:g})")


def scheme_margenau_hill(alpha: float = 0.0) -> SchemeSpec:
    """Weighted mixture of the two orderings of the Kirkwood-Dirac word."""
    fwd = [Factor(0, 1.0, 0), Factor(1, 1.0, 1)]
    rev = [Factor(1, 1.0, 1), Factor(0, 1.0, 0)]
    a = float(alpha)
    return SchemeSpec(
        2,
        (((1 + a) / 2, fwd), ((1 - a) / 2, rev)),
        label=f"margenau_hill({alpha:g})",
    )


def scheme_born_jordan(quadrature_nodes: int = 201) -> SchemeSpec:
    """Gauss-Legendre discretization of the equal-weight ordering average.

    The continuous mixture (1/2) * integral over k in [-1, 1] of
    exp(-i (1-k)/2 s A) exp(-i t B) exp(-i (1+k)/2 s A) dk is replaced by
    one split word per quadrature node. Marginals stay exact; only the
    joint weights depend on the node count, so outputs carry an
    ``approximate`` flag.
    """
    if quadrature_nodes < 1:
        raise DomainError(f"need at least one quadrature node, got {quadrature_nodes}")
    nodes, weights = np.polynomial.legendre.leggauss(quadrature_nodes)
    terms = []
    for k, w in zip(nodes, weights):
        word = [
            Factor(0, (1 - k) / 2, 0),
            Factor(1, 1.0, 1),
            Factor(0, (1 + k) / 2, 0),
        ]
        terms.append((w / 2, word))
    return SchemeSpec(
        2, tuple(terms), label=f"born_jordan({quadrature_nodes})", approximate=True
    )


def scheme_alternating(x_coeffs, y_coeffs, first_var: int = 0, label: str = None) -> SchemeSpec:
    """Single word alternating between the two observables.

    ``x_coeffs`` multiply the variable-0 factors and ``y_coeffs`` the
    variable-1 factors; each list must sum to one. The word starts with
    ``first_var`` and alternates, so the starting list may be one entry
    longer than the other (it then also ends the word).
    """
    xs = [float(c) for c in x_coeffs]
    ys = [float(c) for c in y_coeffs]
    first, second = (xs, ys) if first_var == 0 else (ys, xs)
    if len(first) not in (len(second), len(second) + 1):
        raise DomainError(
            "starting coefficient list must be as long as the other or one entry longer"
        )
    word = []
    for i in range(len(first)):
        var = first_var
        word.append(Factor(var, first[i], var))
        if i < len(second):
            var = 1 - first_var
            word.append(Factor(var, second[i], var))
    return SchemeSpec(2, ((1.0, word),), label=label or "alternating")


@dataclass(frozen=True)
class OperatorAtomSet:
    """Operator-valued atoms on a finite support.

    ``points`` has shape (P, n_vars) with rows sorted lexicographically;
    ``matrices`` has shape (P, N, N). Atoms sum to the identity, and for
    each variable the atoms sharing an eigenvalue coordinate sum to the
    corresponding spectral projector.
    """

    n_vars: int
    points: np.ndarray
    matrices: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def identity_defect(self) -> float:
        """Max-norm distance of the atom sum from the identity."""
        return float(np.abs(self.matrices.sum(axis=0) - np.eye(self.dim)).max())

    def hermiticity_defect(self) -> float:
        """Largest hermiticity defect over all atoms."""
        return float(
            np.abs(self.matrices - self.matrices.conj().transpose(0, 2, 1)).max()
        )

    def marginal_operator(self, var: int, value: float, tol: float = 1e-9) -> np.ndarray:
        """Sum of atoms whose coordinate for ``var`` equals ``value``."""
        if not 0 <= var < self.n_vars:
            raise IndexError(f"variable index {var} out of range")
        mask = np.abs(self.points[:, var] - value) <= tol
        return self.matrices[mask].sum(axis=0)

    def weights_for(self, matrix) -> np.ndarray:
        """Trace of each atom against a matrix (the raw joint weights)."""
        return np.einsum("pij,ji->p", self.matrices, np.asarray(matrix, dtype=complex))

    def hashed_operator(self, s_points) -> np.ndarray:
        """Fourier sum of the atoms: sum over x of exp(-i s.x) atom(x)."""
        pts = _check_points(self.n_vars, s_points)
        phases = np.exp(-1j * pts @ self.points.T)
        return np.einsum("mp,pij->mij", phases, self.matrices)


@dataclass(frozen=True)
class QuasiDistribution:
    """Complex weights on a finite set of joint support points.

    The weights sum to one; every single-variable marginal is real and
    matches the Born distribution of that observable. Individual weights
    may be complex or negative depending on the scheme.
    """

    n_vars: int
    points: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.points.shape[0]

    def total(self) -> complex:
        return complex(self.weights.sum())

    def max_imag(self) -> float:
        return float(np.abs(self.weights.imag).max()) if len(self) else 0.0

    def weight_at(self, point, tol: float = 1e-9) -> complex:
        """Weight at a support point, 0 if no point matches within tol."""
        target = np.asarray(point, dtype=float).reshape(-1)
        if target.shape != (self.n_vars,):
            raise DimensionMismatchError(
                f"point has {target.size} coordinates, expected {self.n_vars}"
            )
        mask = (np.abs(self.points - target) <= tol).all(axis=1)
        return complex(self.weights[mask].sum()) if mask.any() else 0.0

    def characteristic(self, s_points) -> np.ndarray:
        """sum over x of w(x) exp(-i s.x) for each frequency vector."""
        pts = _check_points(self.n_vars, s_points)
        return np.exp(-1j * pts @ self.points.T) @ self.weights


def _check_points(n_vars, s_points) -> np.ndarray:
    pts = np.asarray(s_points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1) if n_vars > 1 else pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] != n_vars:
        raise DimensionMismatchError(
            f"expected frequency vectors of length {n_vars}, got shape {pts.shape}"
        )
    return pts


def _check_observables(n_vars, observables):
    if len(observables) != n_vars:
        raise DimensionMismatchError(
            f"scheme has {n_vars} variables but {len(observables)} observables given"
        )
    dims = {o.dim for o in observables}
    if len(dims) > 1:
        raise DimensionMismatchError(f"observables have mixed dimensions {sorted(dims)}")


def _batch_phase_exponential(eig: linalg.EigenSystem, scales) -> np.ndarray:
    """exp(-1j * scale * H) for a batch of scales, shape (M, N, N)."""
    phases = np.exp(-1j * np.outer(scales, eig.eigenvalues))
    projs = np.stack(eig.projectors)
    return np.einsum("mk,kij->mij", phases, projs)


def _cluster_values(values, tol):
    """Map each float to a cluster representative (values within tol merge).

    Representatives are cluster means rounded to a 1e-12 grid so that
    coordinates arising from different rounding paths key identically.
    """
    uniq = np.unique(values)
    rep = {}
    start = 0
    n = uniq.size
    for i in range(1, n + 1):
        if i == n or uniq[i] - uniq[i - 1] > tol:
            r = round(float(uniq[start:i].mean()), 12) + 0.0  # no negative zero keys
            for u in uniq[start:i]:
                rep[float(u)] = r
            start = i
    return rep


def build_atoms(
    spec: SchemeSpec,
    observables,
    *,
    merge_tol: float = DEFAULT_MERGE_TOL,
    prune_tol: float = DEFAULT_PRUNE_TOL,
) -> OperatorAtomSet:
    """Exact operator atoms of a product-form scheme.

    Every factor exp(-i s c A) expands over the eigenprojectors of A; each
    choice of one eigenvalue per factor contributes the ordered projector
    product, scaled by the term weight, at the coordinate vector whose
    v-th entry is the coefficient-weighted sum of chosen eigenvalues over
    the factors of variable v. Atoms at coinciding coordinates (within
    ``merge_tol``) are merged; atoms below ``prune_tol`` in max-norm are
    dropped.
    """
    if isinstance(spec, WignerScheme):
        raise UnsupportedSchemeError(
            "the symmetric scheme has no finite atom decomposition; "
            "use its characteristic function instead"
        )
    _check_observables(spec.n_vars, observables)
    dim = observables[0].dim

    candidates = []  # (coords ndarray, matrix)
    for weight, word in spec.terms:
        eigs = [observables[f.obs].eig for f in word]
        index_ranges = [range(e.eigenvalues.size) for e in eigs]
        for choice in itertools.product(*index_ranges):
            coords = np.zeros(spec.n_vars)
            mat = None
            for f, eig, k in zip(word, eigs, choice):
                coords[f.var] += f.coeff * eig.eigenvalues[k]
                proj = eig.projectors[k]
                mat = proj if mat is None else mat @ proj
            if mat is None:
                mat = np.eye(dim, dtype=complex)
            candidates.append((coords, weight * mat))

    all_coords = np.array([c for c, _ in candidates])
    reps = [_cluster_values(all_coords[:, v], merge_tol) for v in range(spec.n_vars)]

    merged = {}
    for coords, mat in candidates:
        key = tuple(reps[v][float(coords[v])] for v in range(spec.n_vars))
        if key in merged:
            merged[key] = merged[key] + mat
        else:
            merged[key] = mat.astype(complex)

    keys = sorted(k for k, m in merged.items() if np.abs(m).max() >= prune_tol)
    points = np.array(keys, dtype=float).reshape(len(keys), spec.n_vars)
    matrices = np.array([merged[k] for k in keys], dtype=complex).reshape(
        len(keys), dim, dim
    )
    meta = {
        "scheme": spec.label,
        "observables": tuple(o.label for o in observables),
        "approximate": spec.approximate,
    }
    atoms = OperatorAtomSet(spec.n_vars, points, matrices, meta)
    defect = atoms.identity_defect()
    if defect > 1e-10:
        raise QuasiJointError(
            f"atom normalization failed: identity defect {defect:.3e}"
        )
    return atoms


def evaluate_distribution(
    atoms: OperatorAtomSet,
    rho: DensityState,
    *,
    prune_tol: float = DEFAULT_PRUNE_TOL,
) -> QuasiDistribution:
    """Joint weights of a state: trace of each atom against the density matrix."""
    if atoms.dim != rho.dim:
        raise DimensionMismatchError(f"atom dim {atoms.dim} vs state dim {rho.dim}")
    w = atoms.weights_for(rho.matrix)
    keep = np.abs(w) >= prune_tol
    return QuasiDistribution(
        atoms.n_vars, atoms.points[keep].copy(), w[keep], dict(atoms.meta)
    )


def marginal(dist: QuasiDistribution, keep_var: int) -> QuasiDistribution:
    """Sum the weights over all variables except ``keep_var``."""
    if not 0 <= keep_var < dist.n_vars:
        raise IndexError(f"variable index {keep_var} out of range for {dist.n_vars} variables")
    values, inverse = np.unique(dist.points[:, keep_var], return_inverse=True)
    sums = np.zeros(values.size, dtype=complex)
    np.add.at(sums, inverse, dist.weights)
    meta = dict(dist.meta)
    meta["marginal_of"] = meta.get("scheme", "?")
    meta["kept_var"] = keep_var
    return QuasiDistribution(1, values.reshape(-1, 1), sums, meta)


def born_distribution(observable: HermitianObservable, rho: DensityState) -> QuasiDistribution:
    """Outcome distribution of a single observable, from its projectors.

    Atoms sit at every distinct eigenvalue, including zero-weight ones.
    """
    if observable.dim != rho.dim:
        raise DimensionMismatchError(
            f"observable dim {observable.dim} vs state dim {rho.dim}"
        )
    eig = observable.eig
    raw = np.array([np.trace(p @ rho.matrix) for p in eig.projectors])
    if np.abs(raw.imag).max() > 1e-12:
        raise QuasiJointError("Born weights came out non-real; inputs are inconsistent")
    w = raw.real
    if w.min() < -1e-10 or abs(w.sum() - 1.0) > 1e-12:
        raise QuasiJointError("Born weights are not a probability distribution")
    order = np.argsort(eig.eigenvalues)  # ascending, matching the sorted convention
    points = eig.eigenvalues[order].reshape(-1, 1)
    meta = {"scheme": "born", "observables": (observable.label,), "approximate": False}
    return QuasiDistribution(1, points.copy(), w[order].astype(complex), meta)


def quantize(f, atoms: OperatorAtomSet) -> np.ndarray:
    """Operator for a classical function: sum over x of f(x) atom(x).

    ``f`` is called with the coordinates unpacked, e.g. ``f(x, y)`` for two
    variables.
    """
    values = np.array([f(*p) for p in atoms.points], dtype=complex)
    return np.einsum("p,pij->ij", values, atoms.matrices)


def quasi_expectation(f, dist: QuasiDistribution) -> complex:
    """Classical-side expectation: sum over x of f(x) w(x)."""
    values = np.array([f(*p) for p in dist.points], dtype=complex)
    return complex(values @ dist.weights)


def characteristic_function(spec, observables, rho: DensityState, s_points) -> np.ndarray:
    """Trace of the state against the mixed exponential at each frequency.

    ``spec`` may be a :class:`SchemeSpec` or a :class:`WignerScheme`; both
    provide the operator-valued mixture directly, so no atom decomposition
    is needed.
    """
    _check_observables(spec.n_vars, observables)
    if observables[0].dim != rho.dim:
        raise DimensionMismatchError(
            f"observable dim {observables[0].dim} vs state dim {rho.dim}"
        )
    h = spec.hashed_operator_batch(observables, s_points)
    return np.einsum("mij,ji->m", h, rho.matrix)


def max_weight_deviation(a: QuasiDistribution, b: QuasiDistribution, point_tol: float = 1e-9) -> float:
    """Largest absolute weight difference after matching support points.

    Points present on one side only count with their full weight.
    """
    if a.n_vars != b.n_vars:
        raise DimensionMismatchError("distributions have different variable counts")
    matched = np.zeros(len(b), dtype=bool)
    dev = 0.0
    for p, w in zip(a.points, a.weights):
        mask = (np.abs(b.points - p) <= point_tol).all(axis=1)
        if mask.any():
            matched |= mask
            dev = max(dev, abs(w - b.weights[mask].sum()))
        else:
            dev = max(dev, abs(w))
    if (~matched).any():
        dev = max(dev, float(np.abs(b.weights[~matched]).max()))
    return dev


def wigner_density_estimate(
    observables,
    rho: DensityState,
    x_grid,
    y_grid,
    *,
    s_extent: float = 30.0,
    s_steps: int = 241,
    window_sigma: float = None,
):
    """Windowed Fourier inversion of the symmetric-scheme characteristic function.

    The true density generally does not exist as a function (the inversion
    integral can oscillate without bound), so the characteristic function
    is damped by a Gaussian window before the inverse transform. Returns
    ``(density, meta)`` where ``density[i, j]`` estimates the value at
    ``(x_grid[i], y_grid[j])`` and ``meta`` flags the result as
    approximate and possibly divergent.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    svals = np.linspace(-s_extent, s_extent, s_steps)
    ds = svals[1] - svals[0]
    ss, tt = np.meshgrid(svals, svals, indexing="ij")
    pts = np.column_stack([ss.ravel(), tt.ravel()])
    chi = characteristic_function(WignerScheme(2), observables, rho, pts).reshape(
        s_steps, s_steps
    )
    if window_sigma is None:
        window_sigma = s_extent / 4
    window = np.exp(-(ss**2 + tt**2) / (2 * window_sigma**2))
    integrand = chi * window
    ex = np.exp(1j * np.outer(svals, x_grid))
    ey = np.exp(1j * np.outer(svals, y_grid))
    density = (ex.T @ integrand @ ey).real * (ds * ds) / (2 * np.pi) ** 2
    meta = {
        "scheme": "wigner",
        "approximate": True,
        "possibly_divergent": True,
        "window_sigma": float(window_sigma),
        "s_extent": float(s_extent),
        "s_steps": int(s_steps),
    }
    return density, meta
