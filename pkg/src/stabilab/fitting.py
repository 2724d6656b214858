"""Weighted polynomial fits of encoded error rates, pseudo-thresholds and leading orders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

BASELINE = 2.0 / 3.0  # unencoded error rate is (2/3) p for an information qubit held in |0>
P_MIN, P_MAX = 1e-8, 1.0


class FitError(ValueError):
    """Fit is underdetermined or the input is malformed."""


@dataclass
class FitResult:
    """Fit of ``sum_i a_i p**(i+2)``.

    ``linear`` and ``linear_sigma`` come from an auxiliary fit with an extra
    ``c p`` term.  When that term is significant the data carries first-order
    failures and thresholds are computed with it included.
    """

    degree: int
    coefficients: np.ndarray
    residuals: np.ndarray
    p: np.ndarray
    linear: float = 0.0
    linear_sigma: float = 0.0
    linear_component: bool = False
    aux_coefficients: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def leading_order(self) -> float:
        return float(self.coefficients[0])

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return sum(a * p ** (i + 2) for i, a in enumerate(self.coefficients))

    def model(self, p) -> np.ndarray:
        """Curve used for the threshold: includes the linear term when it is significant."""
        if not self.linear_component:
            return self(p)
        p = np.asarray(p, dtype=float)
        return self.linear * p + sum(a * p ** (i + 2) for i, a in enumerate(self.aux_coefficients))


def _as_arrays(points) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    rows = [tuple(pt) for pt in points]
    if not rows:
        raise FitError("no data points")
    width = {len(r) for r in rows}
    if width not in ({2}, {3}):
        raise FitError("points must be (p, rate) or (p, rate, variance)")
    arr = np.asarray(rows, dtype=float)
    p, y = arr[:, 0], arr[:, 1]
    if np.any(p <= 0) or np.any(~np.isfinite(arr)):
        raise FitError("p must be positive and finite")
    if np.any(y < 0) or np.any(y > 1):
        raise FitError("rates must lie in [0, 1]")
    return p, y, (arr[:, 2] if arr.shape[1] == 3 else None)


def _wls(cols: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weighted least squares with column scaling; returns (coefficients, covariance)."""
    sw = np.sqrt(w)
    a = cols * sw[:, None]
    scale = np.linalg.norm(a, axis=0)
    scale[scale == 0] = 1.0
    a = a / scale
    coef, *_ = np.linalg.lstsq(a, y * sw, rcond=None)
    cov = np.linalg.pinv(a.T @ a) / np.outer(scale, scale)
    return coef / scale, cov


def fit_polynomial(points: Iterable[Sequence[float]], degree: int = 3) -> FitResult:
    """Least-squares fit of ``a_0 p^2 + ... + a_{degree-2} p^degree`` (no constant or linear term).

    Points are ``(p, rate)`` or ``(p, rate, variance)``.  Weights are
    ``1/variance``, zero variances raised to the smallest positive one; without
    variances each point is weighted by ``1/rate**2`` (relative errors) and the
    error scale is estimated from the residuals.
    """
    if degree < 2:
        raise FitError("degree must be at least 2")
    p, y, var = _as_arrays(points)
    absolute = var is not None  # given variances fix the error scale; otherwise it is estimated
    nterms = degree - 1
    if len(np.unique(p)) < nterms:
        raise FitError(f"need at least {nterms} distinct p values for degree {degree}, got {len(np.unique(p))}")

    if var is None:
        floor = max(float(np.max(y)), 1e-300) * 1e-12
        var = np.maximum(y ** 2, floor)
    else:
        positive = var[var > 0]
        floor = float(np.min(positive)) if positive.size else 1.0
        var = np.maximum(var, floor)
    w = 1.0 / var

    cols = np.stack([p ** (i + 2) for i in range(nterms)], axis=1)
    coef, _ = _wls(cols, y, w)
    res = y - cols @ coef

    fit = FitResult(degree, coef, res, p)
    if len(np.unique(p)) > nterms:
        aux_cols = np.column_stack([p, cols])
        aux, cov = _wls(aux_cols, y, w)
        dof = len(p) - aux_cols.shape[1]
        chi2 = float(np.sum(w * (y - aux_cols @ aux) ** 2))
        if dof <= 0:
            inflate = np.inf
        else:
            inflate = max(1.0, chi2 / dof) if absolute else chi2 / dof
        sigma = float(np.sqrt(max(cov[0, 0], 0.0) * inflate)) if np.isfinite(inflate) else np.inf
        fit.linear, fit.linear_sigma, fit.aux_coefficients = float(aux[0]), sigma, aux[1:]
        i0 = int(np.argmin(p))
        # significant and a visible share (>= 5%) of the rate at the smallest p
        fit.linear_component = bool(aux[0] > 3 * sigma and aux[0] * p[i0] >= 0.05 * max(y[i0], 1e-300))
    return fit


def pseudo_threshold(fit: FitResult) -> float | None:
    """Smallest p in [1e-8, 1] where the fitted rate equals (2/3) p, or ``None``."""
    if fit.linear_component:
        lin, coef = fit.linear, fit.aux_coefficients
    else:
        lin, coef = 0.0, fit.coefficients
        if coef[0] <= 0:
            return None

    def h(p):  # (fit(p) - (2/3) p) / p
        return lin - BASELINE + sum(a * p ** (i + 1) for i, a in enumerate(coef))

    if h(P_MIN) >= 0:
        return None
    grid = np.geomspace(P_MIN, P_MAX, 4001)
    vals = h(grid)
    cross = np.flatnonzero((vals[:-1] < 0) & (vals[1:] >= 0))
    if not cross.size:
        return None
    i = int(cross[0])
    if vals[i + 1] == 0:
        return float(grid[i + 1])
    return float(brentq(h, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-12))


def leading_order_series(points: Iterable[Sequence[float]]) -> list[tuple[float, float, tuple[float, float]]]:
    """``(p, rate/p**2, (lo/p**2, hi/p**2))`` per point.

    Points are ``(p, rate)`` or ``(p, rate, lo, hi)``; without a band the
    spread collapses onto the rate.
    """
    out = []
    for pt in points:
        p, rate, *band = (float(v) for v in pt)
        if p <= 0:
            raise FitError("p must be positive")
        lo, hi = band if len(band) == 2 else (rate, rate)
        s = p * p
        out.append((p, rate / s, (lo / s, hi / s)))
    return out


__all__ = ["BASELINE", "FitError", "FitResult", "fit_polynomial", "leading_order_series", "pseudo_threshold"]
