"""Normalized positive linear maps in Kraus form, operator connections,
weighted geometric-type means, and the relative operator entropy with a
negative parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HypothesisError, ParameterError
from .hermitian import (
    Array,
    SpectralWindow,
    apply_scalar_function,
    eig_hermitian,
    hermitize,
    require_hermitian,
)

NORMALIZATION_TOL = 1e-10
CONDITION_FLOOR = 1e-10
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class PositiveLinearMap:
    """Phi(X) = sum_i W_i* X W_i with sum_i W_i* W_i = I (Phi(I_in) = I_out).

    Each Kraus factor W_i has shape (dim_in, dim_out); positivity of Phi is
    automatic from the form, normalization is validated on construction.
    """

    kraus: tuple
    dim_in: int
    dim_out: int

    def __post_init__(self):
        ops = tuple(np.asarray(w, dtype=complex) for w in self.kraus)
        if not ops:
            raise ValueError("Kraus list must be nonempty")
        for w in ops:
            if w.shape != (self.dim_in, self.dim_out):
                raise ValueError(f"Kraus factor shape {w.shape} != ({self.dim_in}, {self.dim_out})")
        object.__setattr__(self, "kraus", ops)
        defect = self.normalization_defect()
        if defect > NORMALIZATION_TOL:
            raise ValueError(f"map is not normalized: |sum W*W - I| = {defect:.3e}")

    def normalization_defect(self) -> float:
        acc = sum(w.conj().T @ w for w in self.kraus)
        return float(np.max(np.abs(acc - np.eye(self.dim_out))))


def apply_map(phi: PositiveLinearMap, x) -> Array:
    """Evaluate Phi(X) = sum_i W_i* X W_i; preserves Hermiticity and positivity."""
    arr = require_hermitian(x, "X")
    if arr.shape[0] != phi.dim_in:
        raise ValueError(f"dimension mismatch: X is {arr.shape[0]}, map expects {phi.dim_in}")
    acc = np.zeros((phi.dim_out, phi.dim_out), dtype=complex)
    for w in phi.kraus:
        acc += w.conj().T @ arr @ w
    return hermitize(acc)


def sqrt_invsqrt(a) -> tuple[Array, Array]:
    """A^(1/2) and A^(-1/2) for strictly positive, well-conditioned A.

    Refuses when the smallest eigenvalue is below 1e-10 times the largest:
    the inequality chains amplify inversion error.
    """
    dec = eig_hermitian(require_hermitian(a, "A"))
    lam = dec.eigenvalues
    if lam[0] <= 0.0 or lam[0] < CONDITION_FLOOR * lam[-1]:
        raise DomainError(
            f"matrix too ill-conditioned to invert: spectrum [{float(lam[0]):.3e}, {float(lam[-1]):.3e}]")
    root = np.sqrt(lam)
    return dec.rebuild(root), dec.rebuild(1.0 / root)


def f_connection(a, b, f) -> Array:
    """A^(1/2) f(A^(-1/2) B A^(-1/2)) A^(1/2) for strictly positive A."""
    rt, irt = sqrt_invsqrt(a)
    bb = require_hermitian(b, "B")
    t = hermitize(irt @ bb @ irt)
    return hermitize(rt @ apply_scalar_function(t, f) @ rt)


def sharp(a, b, v: float) -> Array:
    """Weighted geometric-type mean: the f-connection with f(t) = t^v.

    For v < 0 (and for fractional v) the inner operand must be strictly
    positive; violations surface as DomainError from the spectral calculus.
    """
    v = float(v)
    return f_connection(a, b, lambda t: t ** v)


def tsallis_entropy(a, b, p: float) -> Array:
    """Relative operator entropy (A #_p B - A) / p for p < 0."""
    p = float(p)
    if not p < 0.0:
        raise ParameterError(f"entropy parameter must be negative, got p={p}")
    base = require_hermitian(a, "A")
    return hermitize((sharp(base, b, p) - base) / p)


@dataclass(frozen=True)
class WeightedFamily:
    """Positive weights summing to 1, each with a map and a window-bounded operator."""

    items: tuple
    window: SpectralWindow

    def validate(self, spectrum_tol: float = 1e-9) -> "WeightedFamily":
        if not self.items:
            raise HypothesisError("weighted family is empty")
        total = 0.0
        dim_in = self.items[0][1].dim_in
        dim_out = self.items[0][1].dim_out
        for weight, phi, op in self.items:
            if weight <= 0.0:
                raise HypothesisError(f"weights must be positive, got {weight}")
            total += weight
            if phi.dim_in != dim_in or phi.dim_out != dim_out:
                raise HypothesisError("all maps must share input and output dimensions")
            arr = require_hermitian(op, "family operator")
            if arr.shape[0] != dim_in:
                raise HypothesisError("operator dimension does not match the maps")
            lam = eig_hermitian(arr).eigenvalues
            tol = spectrum_tol * max(1.0, abs(self.window.M))
            if lam[0] < self.window.m - tol or lam[-1] > self.window.M + tol:
                raise HypothesisError(
                    f"operator spectrum [{float(lam[0]):.6g}, {float(lam[-1]):.6g}] outside "
                    f"window [{self.window.m}, {self.window.M}]")
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise HypothesisError(f"weights sum to {total!r}, expected 1")
        return self


def _rect_to_json(w: Array) -> dict:
    return {
        "rows": int(w.shape[0]),
        "cols": int(w.shape[1]),
        "re": [[float(v) for v in row] for row in w.real],
        "im": [[float(v) for v in row] for row in w.imag],
    }


def _rect_from_json(obj: dict) -> Array:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (obj["rows"], obj["cols"]) or im.shape != re.shape:
        raise ValueError("Kraus factor shape does not match rows/cols")
    return re + 1j * im


def map_to_json(phi: PositiveLinearMap) -> dict:
    """Exchange form: {"dim_in", "dim_out", "kraus": [factor...]}."""
    return {
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "kraus": [_rect_to_json(w) for w in phi.kraus],
    }


def map_from_json(obj: dict) -> PositiveLinearMap:
    kraus = tuple(_rect_from_json(k) for k in obj["kraus"])
    return PositiveLinearMap(kraus=kraus, dim_in=int(obj["dim_in"]), dim_out=int(obj["dim_out"]))
