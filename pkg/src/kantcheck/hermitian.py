"""Hermitian matrix calculus on small dense complex matrices.

Matrices are plain numpy arrays of shape (n, n) with n <= 64.  All
functional calculus goes through a full eigendecomposition, and every
result is re-symmetrized so that roundoff never leaks a non-Hermitian
part into later order checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, HermiticityError, HypothesisError

DIM_CAP = 64
HERMITICITY_RTOL = 1e-12
DEFAULT_REL_TOL = 1e-8

Array = np.ndarray
ScalarFunction = Callable[[float], float]


def frobenius(a: Array) -> float:
    return float(np.linalg.norm(a))


def hermitize(a: Array) -> Array:
    """Average away the non-Hermitian roundoff part of ``a``."""
    return (a + a.conj().T) / 2.0


def identity(dim: int) -> Array:
    return np.eye(dim, dtype=complex)


def require_hermitian(a, name: str = "matrix") -> Array:
    """Validate and return ``a`` as a square complex Hermitian array.

    The allowed deviation from conjugate symmetry is ``1e-12`` times the
    Frobenius norm.  Shape problems raise ValueError, symmetry problems
    raise HermiticityError.
    """
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    n = arr.shape[0]
    if not 1 <= n <= DIM_CAP:
        raise ValueError(f"{name} dimension {n} outside supported range [1, {DIM_CAP}]")
    dev = float(np.max(np.abs(arr - arr.conj().T)))
    if dev > HERMITICITY_RTOL * frobenius(arr):
        raise HermiticityError(f"{name} deviates from Hermitian symmetry by {dev:.3e}")
    return arr


@dataclass(frozen=True)
class SpectralWindow:
    """A spectral interval [m, M] with m < M."""

    m: float
    M: float

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "M", float(self.M))
        if not (math.isfinite(self.m) and math.isfinite(self.M)):
            raise ValueError(f"window bounds must be finite, got [{self.m}, {self.M}]")
        if not self.m < self.M:
            raise ValueError(f"window needs m < M, got [{self.m}, {self.M}]")

    @property
    def width(self) -> float:
        return self.M - self.m

    def require_positive(self) -> "SpectralWindow":
        if self.m <= 0.0:
            raise DomainError(f"window [{self.m}, {self.M}] must satisfy 0 < m")
        return self


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with a unitary eigenbasis (columns)."""

    eigenvalues: Array
    eigenvectors: Array

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def rebuild(self, values: Array) -> Array:
        """Assemble U diag(values) U* from new diagonal values."""
        u = self.eigenvectors
        return hermitize((u * values) @ u.conj().T)


def eig_hermitian(a) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    arr = require_hermitian(a)
    try:
        vals, vecs = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceError(f"eigendecomposition failed: {exc}") from exc
    return SpectralDecomposition(vals, vecs)


def _eval_pointwise(f, xs: Array) -> Array:
    out = np.empty(xs.shape, dtype=float)
    for i, t in enumerate(xs):
        try:
            out[i] = float(f(float(t)))
        except (ArithmeticError, ValueError, TypeError) as exc:
            raise DomainError(f"scalar function undefined at t={float(t)!r}: {exc}") from exc
    return out


def eval_scalar(f, xs: Array) -> Array:
    """Evaluate a real scalar function on a 1-d array of points.

    Tries a vectorized call first and falls back to per-point evaluation.
    Non-finite or non-real results raise DomainError.
    """
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        try:
            ys = np.asarray(f(xs))
            if ys.shape != xs.shape:
                raise TypeError("not vectorized")
        except DomainError:
            raise
        except Exception:
            ys = _eval_pointwise(f, xs)
    if np.iscomplexobj(ys):
        if float(np.max(np.abs(ys.imag))) > 0.0:
            raise DomainError("scalar function returned complex values")
        ys = ys.real
    ys = np.asarray(ys, dtype=float)
    if not np.all(np.isfinite(ys)):
        bad = float(xs[np.flatnonzero(~np.isfinite(ys))[0]])
        raise DomainError(f"scalar function non-finite at t={bad!r}")
    return ys


def apply_scalar_function(a, f) -> Array:
    """Apply a real scalar function to a Hermitian matrix spectrally."""
    dec = eig_hermitian(a)
    return dec.rebuild(eval_scalar(f, dec.eigenvalues))


def _require_positive_spectrum(dec: SpectralDecomposition, what: str) -> None:
    low = float(dec.eigenvalues[0])
    if low <= 0.0:
        raise DomainError(f"{what} needs a strictly positive spectrum; smallest eigenvalue is {low:.6e}")


def matrix_power(a, p: float) -> Array:
    """Spectral power A^p; the spectrum must be strictly positive."""
    dec = eig_hermitian(a)
    _require_positive_spectrum(dec, f"matrix power p={p}")
    return dec.rebuild(dec.eigenvalues ** float(p))


def matrix_log(a) -> Array:
    """Spectral logarithm; the spectrum must be strictly positive."""
    dec = eig_hermitian(a)
    _require_positive_spectrum(dec, "matrix logarithm")
    return dec.rebuild(np.log(dec.eigenvalues))


def matrix_exp(a) -> Array:
    """Spectral exponential of a Hermitian matrix."""
    dec = eig_hermitian(a)
    return dec.rebuild(np.exp(dec.eigenvalues))


@dataclass(frozen=True)
class LoewnerVerdict:
    """Outcome of a numerical A <= B test in the positive-semidefinite order."""

    holds: bool
    min_slack: float
    tolerance_used: float


def loewner_leq(a, b, rel_tol: float = DEFAULT_REL_TOL) -> LoewnerVerdict:
    """Test A <= B: ``min_slack`` is the smallest eigenvalue of B - A.

    The verdict holds when min_slack >= -rel_tol * (1 + ||B - A||_F);
    the relative tolerance keeps chains with mixed magnitudes honest.
    """
    x = require_hermitian(a, "A")
    y = require_hermitian(b, "B")
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = hermitize(y - x)
    slack = float(np.linalg.eigvalsh(diff)[0])
    tol = rel_tol * (1.0 + frobenius(diff))
    return LoewnerVerdict(holds=slack >= -tol, min_slack=slack, tolerance_used=tol)


def spectrum_in_window(a, window: SpectralWindow, tol: float = 0.0) -> bool:
    """True iff every eigenvalue lies in [m - tol, M + tol]."""
    vals = eig_hermitian(a).eigenvalues
    return bool(vals[0] >= window.m - tol and vals[-1] <= window.M + tol)


def superlog_bound(b, window: SpectralWindow, fm: float, fM: float,
                   hypothesis_tol: float = 1e-9) -> Array:
    """Geometric endpoint interpolant applied spectrally to B.

    Computes G(B) for G(t) = fm^((M-t)/(M-m)) * fM^((t-m)/(M-m)), the
    operator separating f(B) from its chord bound whenever f is log-convex
    with endpoint values fm, fM.  Both affine exponent terms commute with B,
    so G is evaluated as a single scalar function of B.
    """
    fm = float(fm)
    fM = float(fM)
    if not (fm > 0.0 and fM > 0.0):
        raise DomainError(f"endpoint values must be positive, got fm={fm}, fM={fM}")
    dec = eig_hermitian(b)
    lam = dec.eigenvalues
    if lam[0] < window.m - hypothesis_tol or lam[-1] > window.M + hypothesis_tol:
        raise HypothesisError(
            f"spectrum [{float(lam[0]):.6g}, {float(lam[-1]):.6g}] not inside "
            f"window [{window.m}, {window.M}]")
    log_vals = ((window.M - lam) * math.log(fm) + (lam - window.m) * math.log(fM)) / window.width
    return dec.rebuild(np.exp(log_vals))


def matrix_to_json(a) -> dict:
    """Exchange form: {"dim": n, "re": [[...]], "im": [[...]]}, row-major."""
    arr = require_hermitian(a)
    return {
        "dim": int(arr.shape[0]),
        "re": [[float(v) for v in row] for row in arr.real],
        "im": [[float(v) for v in row] for row in arr.imag],
    }


def matrix_from_json(obj: dict) -> Array:
    """Parse the exchange form back into a validated Hermitian array."""
    dim = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"re/im shapes {re.shape}/{im.shape} do not match dim={dim}")
    return require_hermitian(re + 1j * im)
