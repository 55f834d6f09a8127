"""Truncated Hilbert spaces H = H_1 x ... x H_d with vectors, covariance operators and tensors."""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from hilbertlevy.errors import DomainError, LayoutMismatchError


# Eigenvalues this far below zero (relative to the largest) are rounding noise of eigh.
EIGENVALUE_TOLERANCE = 1e-12


def _readonly(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SpaceLayout:
    """The component structure of a truncated product space.

    Parameters
    ----------
    dims : `Tuple[int, ...]`
        Truncation dimension n_j of every component space H_j.

    """
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ValueError("A space layout needs at least one component")
        if any(n < 1 for n in dims):
            raise ValueError(f"Truncation dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def d(self):
        """`int`: Number of components."""
        return len(self.dims)

    @property
    def total_dim(self):
        """`int`: Dimension of the full truncated space."""
        return sum(self.dims)

    @property
    def offsets(self):
        """`Tuple[int, ...]`: Start index of every component in the flat coefficient array."""
        return tuple(int(o) for o in np.concatenate(([0], np.cumsum(self.dims)[:-1])))

    def block(self, j):
        """The slice of component ``j`` in the flat coefficient array."""
        if not 0 <= j < self.d:
            raise IndexError(f"Component {j} out of range for {self.d} components")
        start = self.offsets[j]
        return slice(start, start + self.dims[j])

    def blocks(self):
        return [self.block(j) for j in range(self.d)]

    def component_of(self):
        """`numpy.ndarray`: For every flat index the component it belongs to."""
        return np.repeat(np.arange(self.d), self.dims)

    def check(self, other):
        """Raise `LayoutMismatchError` unless ``other`` equals this layout."""
        if other != self:
            raise LayoutMismatchError(f"Layout {other.dims} does not match {self.dims}")

    def component_norms(self, values):
        """Per-component Euclidean norms of flat coefficients of shape ``(..., total_dim)``."""
        values = np.asarray(values)
        return np.stack([np.linalg.norm(values[..., sl], axis=-1) for sl in self.blocks()],
                        axis=-1)


@dataclass(frozen=True, eq=False)
class TruncatedVector:
    """An element u = (u_1, ..., u_d) of the truncated product space.

    Coefficients of all components are stored in one flat array, component ``j`` occupying
    ``layout.block(j)``.

    Parameters
    ----------
    layout : `SpaceLayout`
        The space the vector lives in.
    values : `numpy.ndarray`
        Flat coefficient array of length ``layout.total_dim``.

    """
    layout: SpaceLayout
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values).reshape(-1)
        if values.shape[0] != self.layout.total_dim:
            raise LayoutMismatchError(
                f"Expected {self.layout.total_dim} coefficients, got {values.shape[0]}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_components(cls, components):
        """Build a vector from per-component coefficient sequences."""
        arrays = [np.atleast_1d(np.asarray(c, dtype=float)) for c in components]
        layout = SpaceLayout(tuple(len(a) for a in arrays))
        return cls(layout, np.concatenate(arrays))

    @classmethod
    def zeros(cls, layout):
        return cls(layout, np.zeros(layout.total_dim))

    @classmethod
    def basis(cls, layout, j, k):
        """The k-th basis vector of component j, embedded into H."""
        values = np.zeros(layout.total_dim)
        values[layout.offsets[j] + k] = 1.0
        return cls(layout, values)

    @property
    def coeffs(self):
        """`Tuple[numpy.ndarray, ...]`: Coefficients per component."""
        return tuple(self.values[sl] for sl in self.layout.blocks())

    def component(self, j):
        return self.values[self.layout.block(j)]

    def norm(self):
        return float(np.linalg.norm(self.values))

    def component_norms(self):
        return self.layout.component_norms(self.values)

    def to_list(self):
        """Per-component plain lists, suitable for YAML and JSON output."""
        return [c.tolist() for c in self.coeffs]

    def __add__(self, other):
        self.layout.check(other.layout)
        return TruncatedVector(self.layout, self.values + other.values)

    def __sub__(self, other):
        self.layout.check(other.layout)
        return TruncatedVector(self.layout, self.values - other.values)

    def __neg__(self):
        return TruncatedVector(self.layout, -self.values)

    def __mul__(self, scalar):
        return TruncatedVector(self.layout, float(scalar) * self.values)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedVector):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"TruncatedVector({self.to_list()})"


def inner(u, v):
    """The inner product <u|v> = sum_j <u_j|v_j>_j.

    Parameters
    ----------
    u : `TruncatedVector`
    v : `TruncatedVector`

    Returns
    -------
    `float`

    """
    u.layout.check(v.layout)
    return float(np.dot(u.values, v.values))


def embed(layout, j, x_j):
    """The natural embedding of an element of H_j into H."""
    x_j = np.atleast_1d(np.asarray(x_j, dtype=float))
    if x_j.shape != (layout.dims[j],):
        raise LayoutMismatchError(
            f"Component {j} has dimension {layout.dims[j]}, got {x_j.shape[0]} coefficients")
    values = np.zeros(layout.total_dim)
    values[layout.block(j)] = x_j
    return TruncatedVector(layout, values)


# -------------------------------------------------------------------------------------------------
# Covariance operators
# -------------------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CovOperator:
    """A positive semi-definite trace-class operator, block diagonal over the components.

    Every block is stored spectrally: eigenvalues plus, optionally, the orthonormal eigenbasis
    of that block. A block without a basis is diagonal in the working basis.

    Parameters
    ----------
    layout : `SpaceLayout`
        The space the operator acts on.
    eigenvalues : `numpy.ndarray`
        Flat array of nonnegative eigenvalues, ordered like vector coefficients.
    bases : `Tuple[Optional[numpy.ndarray], ...]`, optional
        Per component an orthogonal ``n_j x n_j`` matrix whose columns are eigenvectors, or
        `None` for diagonal blocks.

    """
    layout: SpaceLayout
    eigenvalues: np.ndarray
    bases: Optional[Tuple[Optional[np.ndarray], ...]] = None

    def __post_init__(self):
        eigenvalues = _readonly(self.eigenvalues).reshape(-1)
        if eigenvalues.shape[0] != self.layout.total_dim:
            raise LayoutMismatchError(
                f"Expected {self.layout.total_dim} eigenvalues, got {eigenvalues.shape[0]}")
        if not np.all(np.isfinite(eigenvalues)):
            raise DomainError("Covariance eigenvalues must be finite")
        if np.any(eigenvalues < 0):
            raise DomainError(f"Covariance eigenvalues must be nonnegative, got {eigenvalues}")
        object.__setattr__(self, "eigenvalues", eigenvalues)

        bases = self.bases if self.bases is not None else (None,) * self.layout.d
        if len(bases) != self.layout.d:
            raise LayoutMismatchError(f"Expected {self.layout.d} bases, got {len(bases)}")
        checked = []
        for n, basis in zip(self.layout.dims, bases):
            if basis is not None:
                basis = _readonly(basis)
                if basis.shape != (n, n):
                    raise LayoutMismatchError(f"Basis of shape {basis.shape}, expected {(n, n)}")
            checked.append(basis)
        object.__setattr__(self, "bases", tuple(checked))

    @classmethod
    def from_eigenvalues(cls, components):
        """A diagonal operator from per-component eigenvalue sequences."""
        arrays = [np.atleast_1d(np.asarray(c, dtype=float)) for c in components]
        return cls(SpaceLayout(tuple(len(a) for a in arrays)), np.concatenate(arrays))

    @classmethod
    def from_matrices(cls, matrices):
        """Eigendecompose symmetric positive semi-definite per-component matrices once.

        Parameters
        ----------
        matrices : `Sequence[array_like]`
            One symmetric ``n_j x n_j`` matrix per component.

        Raises
        ------
        `DomainError`
            If a matrix is not symmetric or has a clearly negative eigenvalue.

        """
        eigenvalues = []
        bases = []
        for j, matrix in enumerate(matrices):
            matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
            if matrix.shape[0] != matrix.shape[1]:
                raise DomainError(f"Covariance block {j} is not square: {matrix.shape}")
            scale = max(1.0, float(np.max(np.abs(matrix))))
            if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12 * scale):
                raise DomainError(f"Covariance block {j} is not symmetric")
            values, basis = np.linalg.eigh(matrix)
            if np.any(values < -EIGENVALUE_TOLERANCE * scale):
                raise DomainError(f"Covariance block {j} is not positive semi-definite: {values}")
            eigenvalues.append(np.clip(values, 0.0, None))
            bases.append(basis)
        layout = SpaceLayout(tuple(len(v) for v in eigenvalues))
        return cls(layout, np.concatenate(eigenvalues), tuple(bases))

    @classmethod
    def identity(cls, layout):
        return cls(layout, np.ones(layout.total_dim))

    @classmethod
    def zeros(cls, layout):
        return cls(layout, np.zeros(layout.total_dim))

    def apply(self, values):
        """Apply the operator to flat coefficient arrays of shape ``(..., total_dim)``."""
        values = np.asarray(values, dtype=float)
        out = np.empty_like(values)
        for sl, basis in zip(self.layout.blocks(), self.bases):
            lam = self.eigenvalues[sl]
            if basis is None:
                out[..., sl] = lam * values[..., sl]
            else:
                out[..., sl] = ((values[..., sl] @ basis) * lam) @ basis.T
        return out

    def sqrt_apply(self, values):
        """Apply the square root Q^{1/2}, used to colour standard normal draws."""
        values = np.asarray(values, dtype=float)
        out = np.empty_like(values)
        for sl, basis in zip(self.layout.blocks(), self.bases):
            root = np.sqrt(self.eigenvalues[sl])
            if basis is None:
                out[..., sl] = root * values[..., sl]
            else:
                out[..., sl] = (values[..., sl] * root) @ basis.T
        return out

    def component_quadratic_forms(self, values):
        """<Q_j u_j|u_j>_j for every component, shape ``(..., d)``."""
        values = np.asarray(values, dtype=float)
        forms = []
        for sl, basis in zip(self.layout.blocks(), self.bases):
            coords = values[..., sl] if basis is None else values[..., sl] @ basis
            forms.append(np.sum(self.eigenvalues[sl] * coords * coords, axis=-1))
        return np.stack(forms, axis=-1)

    def component_traces(self):
        return np.array([self.eigenvalues[sl].sum() for sl in self.layout.blocks()])

    def trace(self):
        return float(self.eigenvalues.sum())

    def is_zero(self):
        return not np.any(self.eigenvalues > 0)

    def scaled(self, a):
        """The operator aQ = a_1 Q_1 x ... x a_d Q_d for nonnegative ``a``."""
        a = np.asarray(a, dtype=float).reshape(-1)
        if a.shape != (self.layout.d,):
            raise LayoutMismatchError(f"Expected {self.layout.d} scale factors, got {a.shape}")
        if np.any(a < 0):
            raise DomainError(f"Covariance scale factors must be nonnegative, got {a}")
        factors = np.repeat(a, self.layout.dims)
        return CovOperator(self.layout, factors * self.eigenvalues, self.bases)

    def component_matrix(self, j):
        lam = self.eigenvalues[self.layout.block(j)]
        basis = self.bases[j]
        if basis is None:
            return np.diag(lam)
        return (basis * lam) @ basis.T

    def to_matrix(self):
        """The dense block diagonal matrix of the operator."""
        n = self.layout.total_dim
        matrix = np.zeros((n, n))
        for j, sl in enumerate(self.layout.blocks()):
            matrix[sl, sl] = self.component_matrix(j)
        return matrix


def apply_cov(cov, u):
    """Apply a covariance operator to a vector.

    Parameters
    ----------
    cov : `CovOperator`
    u : `TruncatedVector`

    Returns
    -------
    `TruncatedVector`

    """
    cov.layout.check(u.layout)
    return TruncatedVector(u.layout, cov.apply(u.values))


def quadratic_form(cov, u):
    """<Qu|u>."""
    cov.layout.check(u.layout)
    return float(cov.component_quadratic_forms(u.values).sum())


def trace(cov):
    return cov.trace()


def cov_matrix(cov):
    """Per-component dense matrices U diag(lambda) U^T."""
    return [cov.component_matrix(j) for j in range(cov.layout.d)]


def scale_by_multiindex(a, u):
    """The vector au = (a_1 u_1, ..., a_d u_d)."""
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.shape != (u.layout.d,):
        raise LayoutMismatchError(f"Expected {u.layout.d} scale factors, got {a.shape[0]}")
    return TruncatedVector(u.layout, np.repeat(a, u.layout.dims) * u.values)


def scale_cov_by_multiindex(a, cov):
    """The operator aQ; negative factors are rejected."""
    return cov.scaled(a)


# -------------------------------------------------------------------------------------------------
# Tensors
# -------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class RankOneTensor:
    """The operator x (x) y : z -> <x|z> y."""
    x: TruncatedVector
    y: TruncatedVector

    def __post_init__(self):
        self.x.layout.check(self.y.layout)

    @property
    def layout(self):
        return self.x.layout

    def apply(self, values):
        values = np.asarray(values, dtype=float)
        return (values @ self.x.values)[..., None] * self.y.values

    def __call__(self, z):
        self.layout.check(z.layout)
        return TruncatedVector(self.layout, inner(self.x, z) * self.y.values)

    def trace(self):
        return inner(self.x, self.y)

    def to_matrix(self):
        return np.outer(self.y.values, self.x.values)


@dataclass(frozen=True)
class OperatorSum:
    """A covariance operator plus weighted rank-one tensors, T = D + sum_k w_k x_k (x) y_k.

    Parameters
    ----------
    diagonal : `CovOperator`
        The block diagonal part.
    terms : `Tuple[Tuple[float, RankOneTensor], ...]`
        Weights and tensors of the low-rank part.

    """
    diagonal: CovOperator
    terms: Tuple[Tuple[float, RankOneTensor], ...] = field(default_factory=tuple)

    def __post_init__(self):
        for _, tensor in self.terms:
            self.diagonal.layout.check(tensor.layout)
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def layout(self):
        return self.diagonal.layout

    def apply(self, values):
        out = self.diagonal.apply(values)
        for weight, tensor in self.terms:
            out = out + weight * tensor.apply(values)
        return out

    def __call__(self, z):
        self.layout.check(z.layout)
        return TruncatedVector(self.layout, self.apply(z.values))

    def trace(self):
        return self.diagonal.trace() + sum(w * t.trace() for w, t in self.terms)

    def quadratic_form(self, u):
        self.layout.check(u.layout)
        return float(np.dot(self.apply(u.values), u.values))

    def to_matrix(self):
        matrix = self.diagonal.to_matrix()
        for weight, tensor in self.terms:
            matrix = matrix + weight * tensor.to_matrix()
        return matrix


def as_vector(layout, values):
    """Coerce nested per-component lists or a flat array into a vector of ``layout``."""
    if isinstance(values, TruncatedVector):
        layout.check(values.layout)
        return values
    if isinstance(values, np.ndarray) and values.ndim == 1:
        return TruncatedVector(layout, values)
    if isinstance(values, Sequence) and len(values) == layout.d and all(
            isinstance(c, (Sequence, np.ndarray)) for c in values):
        vector = TruncatedVector.from_components(values)
        layout.check(vector.layout)
        return vector
    return TruncatedVector(layout, np.asarray(values, dtype=float))
