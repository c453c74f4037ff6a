"""Dip/peak metrics and Gaussian-envelope fitting of coincidence curves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationCurve

KIND_EPS = 1e-6
DEGENERATE_AMPLITUDE = 1e-9


class DegenerateCurveError(ValueError):
    """Raised when a curve carries no dip or peak to fit."""


@dataclass(frozen=True)
class CurveMetrics:
    baseline: float
    extremum: float
    visibility: float
    fwhm: float
    kind: str
    tau_extremum: float


@dataclass(frozen=True)
class FitResult:
    """Best ``b + a * exp(-c tau^2)`` found; ``a < 0`` is a dip."""

    b: float
    a: float
    c: float
    rms_residual: float
    converged: bool
    iterations: int


def _check_curve(curve: CorrelationCurve, min_points: int):
    if len(curve) < min_points:
        raise ValueError(f"curve needs at least {min_points} points, got {len(curve)}")
    if not (np.all(np.isfinite(curve.tau_grid)) and np.all(np.isfinite(curve.r_mean))):
        raise ValueError("curve contains non-finite values")


def _crossing(t0, t1, r0, r1, level):
    if r1 == r0:
        return 0.5 * (t0 + t1)
    return t0 + (level - r0) * (t1 - t0) / (r1 - r0)


def curve_metrics(curve: CorrelationCurve) -> CurveMetrics:
    """Baseline from the outer 10% on each side, extremum, visibility and FWHM.

    The FWHM is the distance between the linearly interpolated crossings of
    half the extremum's deviation from the baseline, walking outwards from
    the extremum.  It is NaN for flat curves or when a crossing falls off
    the grid.
    """
    _check_curve(curve, 5)
    tau, r = curve.tau_grid, curve.r_mean
    n = r.size
    m = max(1, int(round(0.1 * n)))
    baseline = float(np.mean(np.concatenate([r[:m], r[-m:]])))
    dev = r - baseline
    i0 = int(np.argmax(np.abs(dev)))
    extremum = float(r[i0])

    if extremum < baseline - KIND_EPS:
        kind = "dip"
    elif extremum > baseline + KIND_EPS:
        kind = "peak"
    else:
        kind = "flat"
    visibility = abs(extremum - baseline) / baseline if baseline > 0 else math.nan

    fwhm = math.nan
    if kind != "flat":
        half = 0.5 * abs(dev[i0])
        mag = np.maximum(dev, 0.0) if kind == "peak" else np.maximum(-dev, 0.0)
        left = right = None
        for j in range(i0, 0, -1):
            if mag[j - 1] < half:
                left = _crossing(tau[j - 1], tau[j], mag[j - 1], mag[j], half)
                break
        for j in range(i0, n - 1):
            if mag[j + 1] < half:
                right = _crossing(tau[j], tau[j + 1], mag[j], mag[j + 1], half)
                break
        if left is not None and right is not None:
            fwhm = float(right - left)

    return CurveMetrics(baseline, extremum, float(visibility), fwhm, kind, float(tau[i0]))


def fit_gaussian_envelope(curve: CorrelationCurve, max_iter: int = 100, xtol: float = 1e-10) -> FitResult:
    """Least-squares fit of ``b + a exp(-c tau^2)`` by damped Gauss-Newton.

    Starts from :func:`curve_metrics`; Levenberg damping ``lambda`` starts at
    1e-3 and is scaled by 0.3 after an accepted step and by 10 after a
    rejected one.  Delays are rescaled by the initial half width internally
    so the three parameters are of comparable size.
    """
    _check_curve(curve, 8)
    metrics = curve_metrics(curve)
    a0 = metrics.extremum - metrics.baseline
    if abs(a0) < DEGENERATE_AMPLITUDE or metrics.kind == "flat":
        raise DegenerateCurveError(
            f"curve is flat (initial amplitude {a0:.3g}); no dip or peak to fit")

    span = float(curve.tau_grid[-1] - curve.tau_grid[0])
    width = metrics.fwhm if math.isfinite(metrics.fwhm) and metrics.fwhm > 0 else 0.25 * span
    # model is centred on tau = 0; work in units of the initial FWHM
    x = curve.tau_grid / width
    y = curve.r_mean
    p = np.array([metrics.baseline, a0, 4.0 * math.log(2.0)])

    def residual(q):
        return q[0] + q[1] * np.exp(-q[2] * x * x) - y

    def jacobian(q):
        e = np.exp(-q[2] * x * x)
        return np.column_stack([np.ones_like(x), e, -q[1] * x * x * e])

    lam = 1e-3
    res = residual(p)
    cost = float(res @ res)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = jacobian(p)
        A = J.T @ J
        g = J.T @ res
        try:
            step = np.linalg.solve(A + lam * np.eye(3), -g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        trial = p + step
        trial_res = residual(trial)
        trial_cost = float(trial_res @ trial_res)
        small = np.linalg.norm(step) <= xtol * max(np.linalg.norm(p), 1e-300)
        if trial_cost <= cost:
            p, res, cost = trial, trial_res, trial_cost
            lam *= 0.3
        else:
            lam *= 10.0
        if small:
            converged = True
            break
    if converged and not p[2] > 0:
        converged = False
    rms = math.sqrt(cost / y.size)
    return FitResult(float(p[0]), float(p[1]), float(p[2]) / width ** 2, rms, converged, it)
