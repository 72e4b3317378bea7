"""Symmetric positive definite matrices and the rectangular transform.

The eigendecomposition is the single linear-algebra primitive here: the
determinant, square root and positivity checks all come from it, and it is
computed once per matrix and cached.  Dimensions 1 and 2 use the closed-form
eigenvalues because the sampling paths construct millions of small matrices.
"""

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateInputError, DimensionError, ParameterDomainError
from .gammacalc import log_matrix_gamma

__all__ = [
    "SpdMatrix",
    "RectMatrix",
    "RectConfig",
    "rect_transform",
    "spd_sqrt",
    "stiefel_constant",
    "ordering_lt",
    "matrix_to_json",
    "matrix_from_json",
]

# An eigenvalue counts as positive iff it exceeds this times the largest
# absolute eigenvalue.  Scale-invariant, so S and 1e9*S agree on definiteness.
_PD_RTOL = 1e-12


def _sym_eigenvalues(entries):
    """Eigenvalues of a symmetric matrix, descending. Closed form for p <= 2."""
    p = entries.shape[0]
    if p == 1:
        return np.array([entries[0, 0]])
    if p == 2:
        a = entries[0, 0]
        c = entries[1, 1]
        b = entries[0, 1]
        half_tr = 0.5 * (a + c)
        disc = math.hypot(0.5 * (a - c), b)
        return np.array([half_tr + disc, half_tr - disc])
    return np.linalg.eigvalsh(entries)[::-1].copy()


def _is_pd(eigenvalues):
    scale = float(np.max(np.abs(eigenvalues), initial=0.0))
    return scale > 0.0 and bool(np.min(eigenvalues) > _PD_RTOL * scale)


class SpdMatrix:
    """Immutable symmetric positive definite matrix.

    The constructor validates exact symmetry of the stored entries and
    positive definiteness via the eigenvalues (relative tolerance 1e-12 on
    the spectral radius).  Entries are copied and frozen.
    """

    __slots__ = ("_entries", "_eigenvalues", "_eig_full", "__weakref__")

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DegenerateInputError("matrix entries must be finite")
        if not np.array_equal(arr, arr.T):
            raise DegenerateInputError(
                "matrix is not exactly symmetric; symmetrize before constructing")
        eig = _sym_eigenvalues(arr)
        if not _is_pd(eig):
            raise DegenerateInputError(
                f"matrix is not positive definite (eigenvalues {eig.tolist()})")
        arr.setflags(write=False)
        object.__setattr__(self, "_entries", arr)
        object.__setattr__(self, "_eigenvalues", eig)
        object.__setattr__(self, "_eig_full", None)

    def __setattr__(self, name, value):
        raise AttributeError("SpdMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, p):
        return cls(np.eye(p))

    @classmethod
    def diagonal(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def from_symmetrized(cls, entries):
        """Build from a nearly-symmetric array by averaging with its transpose."""
        arr = np.asarray(entries, dtype=float)
        return cls(0.5 * (arr + arr.T))

    # -- views and cached spectra -----------------------------------------

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    @property
    def eigenvalues(self):
        """Eigenvalues in descending order (all strictly positive)."""
        return self._eigenvalues

    def _eigh(self):
        # full decomposition, only materialized when vectors are needed
        full = self._eig_full
        if full is None:
            w, v = np.linalg.eigh(self._entries)
            full = (w[::-1].copy(), v[:, ::-1].copy())
            object.__setattr__(self, "_eig_full", full)
        return full

    # -- scalar functionals ------------------------------------------------

    @property
    def log_det(self):
        return float(np.sum(np.log(self._eigenvalues)))

    @property
    def det(self):
        return float(np.prod(self._eigenvalues))

    @property
    def trace(self):
        return float(np.trace(self._entries))

    def matrix_power(self, t):
        """S**t through the eigendecomposition, for any real exponent t."""
        w, v = self._eigh()
        powered = (v * np.power(w, t)) @ v.T
        return SpdMatrix(0.5 * (powered + powered.T))

    # -- misc ----------------------------------------------------------------

    def to_lists(self):
        return self._entries.tolist()

    def __repr__(self):
        return f"SpdMatrix({self.to_lists()!r})"

    def __eq__(self, other):
        if not isinstance(other, SpdMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())


class RectMatrix:
    """A p x r real matrix with r >= p and full row rank.

    Rank is checked through the singular values: the smallest must exceed
    1e-10 times the largest.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {arr.shape}")
        p, r = arr.shape
        if r < p:
            raise DimensionError(f"need at least as many columns as rows, got {p}x{r}")
        if not np.all(np.isfinite(arr)):
            raise DegenerateInputError("matrix entries must be finite")
        sv = np.linalg.svd(arr, compute_uv=False)
        if sv[0] == 0.0 or sv[-1] <= 1e-10 * sv[0]:
            raise DegenerateInputError(
                f"matrix is rank deficient (singular values {sv.tolist()})")
        arr.setflags(write=False)
        object.__setattr__(self, "_entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("RectMatrix is immutable")

    @property
    def entries(self):
        return self._entries

    @property
    def rows(self):
        return self._entries.shape[0]

    @property
    def cols(self):
        return self._entries.shape[1]

    def to_lists(self):
        return self._entries.tolist()

    def __repr__(self):
        return f"RectMatrix({self.to_lists()!r})"


@dataclass(frozen=True)
class RectConfig:
    """Shape and weights (p, r, A, B) of the rectangular quadratic transform.

    A is p x p, B is r x r, both symmetric positive definite, and r >= p so
    the transform X -> A^(1/2) X B X' A^(1/2) lands on full-rank output.
    """

    p: int
    r: int
    A: SpdMatrix
    B: SpdMatrix

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.r, int)):
            raise ParameterDomainError("p and r must be integers")
        if self.p < 1 or self.r < self.p:
            raise DimensionError(f"need r >= p >= 1, got p={self.p}, r={self.r}")
        if self.A.dim != self.p:
            raise DimensionError(f"A must be {self.p}x{self.p}, got {self.A.dim}")
        if self.B.dim != self.r:
            raise DimensionError(f"B must be {self.r}x{self.r}, got {self.B.dim}")

    @classmethod
    def with_identity_weights(cls, p, r):
        return cls(p=p, r=r, A=SpdMatrix.identity(p), B=SpdMatrix.identity(r))

    @cached_property
    def _sqrt_A(self):
        return self.A.matrix_power(0.5)

    @cached_property
    def log_weight_factor(self):
        """log of |A|^(r/2) |B|^(p/2), the determinant weight of the transform."""
        return 0.5 * self.r * self.A.log_det + 0.5 * self.p * self.B.log_det

    @cached_property
    def log_density_const(self):
        """log of the Gaussian normalizer |A|^(r/2) |B|^(p/2) / pi^(rp/2)."""
        return self.log_weight_factor - 0.5 * self.r * self.p * math.log(math.pi)


def rect_transform(X, cfg):
    """A^(1/2) X B X' A^(1/2) as an SpdMatrix.

    Full-rank X of shape (cfg.p, cfg.r) maps to a positive definite p x p
    matrix; the product is symmetrized before construction to scrub float
    asymmetry.
    """
    if not isinstance(X, RectMatrix):
        X = RectMatrix(X)
    if X.rows != cfg.p or X.cols != cfg.r:
        raise DimensionError(
            f"X has shape {X.rows}x{X.cols}, config expects {cfg.p}x{cfg.r}")
    ah = cfg._sqrt_A.entries
    core = X.entries @ cfg.B.entries @ X.entries.T
    z = ah @ core @ ah
    return SpdMatrix(0.5 * (z + z.T))


def spd_sqrt(S):
    """Symmetric positive definite square root of S."""
    return S.matrix_power(0.5)


def stiefel_constant(p, r):
    """log of pi^(rp/2) / Gamma_p(r/2), the surface constant of the r-frame
    reduction that converts rectangular integrals to cone integrals."""
    if not (isinstance(p, int) and isinstance(r, int)) or p < 1:
        raise ParameterDomainError(f"p and r must be positive integers, got {p!r}, {r!r}")
    if r < p:
        raise ParameterDomainError(f"stiefel_constant requires r >= p, got r={r} < p={p}")
    return 0.5 * r * p * math.log(math.pi) - log_matrix_gamma(p, 0.5 * r)


def ordering_lt(S1, S2):
    """True iff S2 - S1 is positive definite (Loewner strict order).

    Irreflexive by construction: the zero difference has no positive
    eigenvalues at any tolerance.
    """
    if S1.dim != S2.dim:
        raise DimensionError(f"dimension mismatch: {S1.dim} vs {S2.dim}")
    diff = S2.entries - S1.entries
    return _is_pd(_sym_eigenvalues(diff))


# ---------------------------------------------------------------------------
# JSON matrix exchange: arrays of row arrays, dimensions inferred from shape
# ---------------------------------------------------------------------------

def matrix_to_json(m):
    """Serialize a matrix (SpdMatrix, RectMatrix or array) to a JSON string."""
    if isinstance(m, (SpdMatrix, RectMatrix)):
        payload = m.to_lists()
    else:
        payload = np.asarray(m, dtype=float).tolist()
    return json.dumps(payload)


def matrix_from_json(text):
    """Parse a JSON array-of-arrays into a float ndarray, validating shape."""
    obj = json.loads(text)
    try:
        arr = np.array(obj, dtype=float)
    except ValueError as exc:  # ragged rows
        raise DimensionError(f"rows have mismatched lengths: {exc}")
    if arr.ndim != 2:
        raise DimensionError(
            f"expected a JSON array of row arrays, got ndim={arr.ndim}")
    return arr
