"""Statistical machinery linking Monte Carlo samples to analytic solutions.

Empirical characteristic functions with standard-error bands, a one-sample
Kolmogorov-Smirnov test against an arbitrary CDF evaluator, and adaptive
quadrature normalization checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import kolmogorov

from .errors import AccuracyError

__all__ = ["EmpiricalCF", "empirical_cf", "ks_statistic", "check_normalization"]


@dataclass(frozen=True)
class EmpiricalCF:
    """Monte Carlo estimate of a characteristic function at one frequency."""

    xi: float | np.ndarray
    estimate: complex
    std_error: float
    n_samples: int


def empirical_cf(samples, xi) -> EmpiricalCF:
    """Estimate ``E exp(i xi . X)`` from samples.

    ``samples`` is ``(N,)`` for scalar variables or ``(N, n)`` for vectors,
    with ``xi`` a matching scalar or length-``n`` vector.  The reported
    ``std_error`` is the larger of the real- and imaginary-part standard
    errors, which keeps the usual 3-sigma band conservative.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0 or samples.shape[0] < 2:
        raise ValueError("need at least two samples")
    if samples.ndim == 1:
        proj = samples * float(xi)
    elif samples.ndim == 2:
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (samples.shape[1],):
            raise ValueError("xi must match the sample dimension")
        proj = samples @ xi
    else:
        raise ValueError("samples must be 1-d or 2-d")
    n = proj.shape[0]
    re = np.cos(proj)
    im = np.sin(proj)
    est = complex(re.mean(), im.mean())
    se = max(float(re.std(ddof=1)), float(im.std(ddof=1))) / math.sqrt(n)
    return EmpiricalCF(xi=xi, estimate=est, std_error=se, n_samples=n)


def ks_statistic(samples, cdf_evaluator):
    """One-sample Kolmogorov-Smirnov statistic and asymptotic p-value.

    ``cdf_evaluator`` must be nondecreasing on the sample range (checked).
    The p-value uses the asymptotic Kolmogorov distribution and is reported
    as ``nan`` below 35 samples, where the asymptotic regime is unreliable.
    """
    samples = np.sort(np.asarray(samples, dtype=float))
    n = samples.size
    if n < 10:
        raise ValueError("need at least 10 samples")
    cdf = np.asarray([float(cdf_evaluator(x)) for x in samples])
    if np.any(np.diff(cdf) < -1e-12):
        raise ValueError("cdf_evaluator is not nondecreasing on the sample range")
    if np.any(cdf < -1e-12) or np.any(cdf > 1.0 + 1e-12):
        raise ValueError("cdf_evaluator must map into [0, 1]")
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    stat = float(max(d_plus, d_minus))
    p = float(kolmogorov(math.sqrt(n) * stat)) if n >= 35 else float("nan")
    return stat, p


def check_normalization(density_evaluator, domain, tol):
    """Adaptive-quadrature mass of a density over ``domain = (a, b)``.

    Returns ``(mass, passed)`` with ``passed`` true iff ``|mass - 1| <= tol``.
    Infinite endpoints are allowed.  Raises ``AccuracyError`` when the
    quadrature's own error estimate exceeds the tolerance.
    """
    a, b = domain
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    mass, quad_err = quad(density_evaluator, a, b, limit=400)
    if not math.isfinite(mass) or quad_err > 0.5 * tol:
        raise AccuracyError(
            "normalization quadrature did not converge",
            estimate=mass,
            error_bound=quad_err,
        )
    return float(mass), bool(abs(mass - 1.0) <= tol)
