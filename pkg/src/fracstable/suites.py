"""Named verification suites exposed through the command line.

Each suite runs a set of checks that compare Monte Carlo simulation
against the analytic solutions (or closed forms against numerical
inversion) and returns one row per check.  Sample counts default to fast
desk-scale values; the full-scale versions of the same comparisons live in
the acceptance test suite.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .sampling import RngStream, sample_isotropic_stable_vector
from .solver import (
    ModelParams,
    cf_iterated_laplace,
    cf_telegraph_k2,
    cf_telegraph_k3,
    cf_time,
    density_radial,
    limit_density,
)
from .special import bessel_k, mittag_leffler, solve_depressed_cubic
from .subordinators import (
    SubordinatorSpec,
    sample_inverse,
    sample_iterated,
    sample_subordinator,
)
from .verify import check_normalization, empirical_cf

__all__ = ["run_suite", "SUITES"]


def _row(suite, check, passed, statistic, threshold):
    return {
        "suite": suite,
        "check": check,
        "passed": bool(passed),
        "statistic": float(statistic),
        "threshold": float(threshold),
    }


def _telegraph_process_cf(lam, c, xi, t):
    """Damped cosh/sinh characteristic function of the telegraph process."""
    d = cmath.sqrt(complex(lam * lam - c * c * xi * xi))
    if abs(d) < 1e-14:
        return math.exp(-lam * t) * (1.0 + lam * t)
    val = cmath.exp(-lam * t) * (cmath.cosh(d * t) + lam / d * cmath.sinh(d * t))
    return float(val.real)


def suite_subordinator(n_samples, seed):
    spec = SubordinatorSpec(terms=((1.0, 0.5), (2.0, 0.8)))
    x = sample_subordinator(spec, 1.0, RngStream(seed, 1), size=n_samples)
    rows = []
    for mu in (0.5, 1.0, 2.0, 4.0, 8.0):
        vals = np.exp(-mu * x)
        est = vals.mean()
        se = vals.std(ddof=1) / math.sqrt(n_samples)
        exact = math.exp(-float(spec.laplace_exponent(mu)))
        dev = abs(est - exact) / max(se, 1e-300)
        rows.append(_row("subordinator", f"laplace mu={mu}", dev <= 3.0, dev, 3.0))
    return rows


def suite_inverse(n_samples, seed):
    rows = []
    for si, spec in enumerate(
        (
            SubordinatorSpec(terms=((1.0, 0.6),)),
            SubordinatorSpec(terms=((1.0, 0.5), (3.0, 0.9))),
        )
    ):
        for k, (x, t) in enumerate(((0.3, 0.5), (0.8, 1.0), (1.5, 1.5), (0.5, 2.0))):
            ld = sample_inverse(spec, t, rng=RngStream(seed, 10 + si * 8 + k), size=n_samples)
            hd = sample_subordinator(spec, x, RngStream(seed, 110 + si * 8 + k), size=n_samples)
            p1 = (ld < x).mean()
            p2 = (hd > t).mean()
            se = math.sqrt(
                p1 * (1 - p1) / n_samples + p2 * (1 - p2) / n_samples
            )
            dev = abs(p1 - p2) / max(se, 1e-300)
            rows.append(
                _row("inverse", f"spec{si} x={x} t={t}", dev <= 3.0, dev, 3.0)
            )
    return rows


def suite_telegraph(n_samples, seed):
    lam = c = 1.0
    nu = 0.4
    model = ModelParams(
        spec=SubordinatorSpec(terms=((1.0, 2 * nu), (2 * lam, nu))), beta=1.0, c=c, n=1
    )
    rows = []
    worst = 0.0
    for xi in (0.3, 0.7, 1.0, 1.5, 3.0):
        for t in (0.3, 0.7, 1.2, 2.0, 3.0):
            closed = cf_telegraph_k2(lam, c, nu, xi, t)
            inv = cf_time(model, xi, t, tol=1e-7)
            worst = max(worst, abs(closed - inv))
    rows.append(_row("telegraph", "closed vs inversion 5x5", worst <= 1e-5, worst, 1e-5))
    worst1 = 0.0
    for xi in (0.2, 0.9, 1.0, 2.4):
        for t in (0.5, 1.0, 2.5):
            a = cf_telegraph_k2(lam, c, 1.0, xi, t)
            b = _telegraph_process_cf(lam, c, xi, t)
            worst1 = max(worst1, abs(a - b))
    rows.append(_row("telegraph", "nu=1 telegraph process", worst1 <= 1e-10, worst1, 1e-10))
    return rows


def suite_k3(n_samples, seed):
    rows = []
    worst = 0.0
    for lam, c, beta, nu, xi, t in (
        (1.0, 1.0, 1.0, 0.3, 1.0, 1.0),
        (1.0, 1.0, 1.0, 0.2, 0.5, 1.0),
        (2.0, 1.0, 0.8, 1.0 / 3.0, 1.5, 0.7),
        (1.0, 0.5, 1.0, 0.25, 2.0, 2.0),
        (1.0, 1.0, 1.0, 1.0 / 3.0, 1.0, 0.5),
    ):
        model = ModelParams(
            spec=SubordinatorSpec(terms=((1.0, 3 * nu), (2 * lam, nu))),
            beta=beta,
            c=c,
            n=1,
        )
        closed = cf_telegraph_k3(lam, c, beta, nu, xi, t)
        inv = cf_time(model, xi, t, tol=1e-7)
        worst = max(worst, abs(closed - inv))
    rows.append(_row("k3", "closed vs inversion 5 points", worst <= 1e-5, worst, 1e-5))
    return rows


def suite_composition(n_samples, seed):
    spec = SubordinatorSpec(terms=((1.0, 0.5), (2.0, 0.8)))
    beta, c, n, t = 0.75, 1.0, 2, 1.0
    model = ModelParams(spec=spec, beta=beta, c=c, n=n)
    lvals = sample_inverse(spec, t, rng=RngStream(seed, 40), size=n_samples)
    rows = []
    gen = RngStream(seed, 41).generator()
    # subordinated Gaussian representation of the isotropic stable vector
    a = np.where(
        lvals > 0, (c * c * lvals) ** (1.0 / beta), 0.0
    )
    from .sampling import _unit_positive_stable

    ab = a * _unit_positive_stable(beta, gen, n_samples)
    z = gen.standard_normal((n_samples, n))
    samples = np.sqrt(2.0 * ab)[:, None] * z
    for xi in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        ecf = empirical_cf(samples, np.array([xi, 0.0]))
        analytic = cf_time(model, xi, t, tol=1e-7)
        dev = abs(ecf.estimate.real - analytic) / max(ecf.std_error, 1e-300)
        rows.append(_row("composition", f"ecf xi={xi}", dev <= 3.0, dev, 3.0))
    return rows


def suite_iterated(n_samples, seed):
    spec = SubordinatorSpec(terms=((1.0, 0.5),))
    rows = []
    x2 = sample_iterated(spec, 2, 1.0, RngStream(seed, 50), size=n_samples)
    for mu, exact in ((1.0, math.exp(-1.0)), (16.0, math.exp(-2.0))):
        vals = np.exp(-mu * x2)
        est = vals.mean()
        se = vals.std(ddof=1) / math.sqrt(n_samples)
        dev = abs(est - exact) / max(se, 1e-300)
        rows.append(_row("iterated", f"r=2 laplace mu={mu}", dev <= 3.0, dev, 3.0))
    # transform-level convergence toward the infinite-iteration limit
    spec2 = SubordinatorSpec(terms=((1.0, 0.7), (1.0, 0.9)))
    lam_sum = 2.0
    target = (1.0 / 2.0) * lam_sum / (lam_sum + 1.0)
    gaps = [
        abs(cf_iterated_laplace(spec2, r, 1.0, 1.0, 1.0, 2.0) - target)
        for r in (2, 4, 8, 16)
    ]
    monotone = all(g2 <= g1 * (1 + 1e-12) for g1, g2 in zip(gaps, gaps[1:]))
    rows.append(_row("iterated", "transform gap shrinks", monotone, gaps[-1], gaps[0]))
    return rows


def suite_limit(n_samples, seed):
    rows = []
    lambdas, c = [1.0], 1.0
    for n in (1, 2, 3):
        area = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)

        def radial_mass(r, n=n, area=area):
            return area * r ** (n - 1) * limit_density(lambdas, c, n, np.array([r] + [0.0] * (n - 1)))

        mass, ok = check_normalization(radial_mass, (0.0, np.inf), 1e-8)
        rows.append(_row("limit", f"normalization n={n}", ok, abs(mass - 1.0), 1e-8))
    # radial inversion of the limit transform vs the closed form
    model = ModelParams(spec=SubordinatorSpec(terms=((1.0, 0.7),)), beta=1.0, c=1.0, n=2)
    grid = np.array([0.5, 1.0, 2.0])
    dg = density_radial(model, grid, limit=True, tol=1e-9)
    closed = np.array([limit_density(lambdas, c, 2, np.array([r, 0.0])) for r in grid])
    rel = float(np.max(np.abs(dg.values - closed) / closed))
    rows.append(_row("limit", "hankel vs closed form n=2", rel <= 1e-6, rel, 1e-6))
    return rows


def suite_special(n_samples, seed):
    rows = []
    e_err = abs(mittag_leffler(1.0, 1.0, 1.0) - math.e)
    rows.append(_row("special", "ml exp identity", e_err <= 1e-12, e_err, 1e-12))
    cos_err = abs(mittag_leffler(-1.0, 2.0, 1.0) - math.cos(1.0))
    rows.append(_row("special", "ml cos identity", cos_err <= 1e-12, cos_err, 1e-12))
    k_half = bessel_k(0.5, 1.0)
    k_err = abs(k_half - math.sqrt(math.pi / 2.0) * math.exp(-1.0))
    rows.append(_row("special", "bessel half-order", k_err <= 1e-12, k_err, 1e-12))
    nu, x = 1.5, 2.0
    rec = abs(
        bessel_k(nu + 1, x) - bessel_k(nu - 1, x) - 2 * nu / x * bessel_k(nu, x)
    ) / bessel_k(nu + 1, x)
    rows.append(_row("special", "bessel recurrence", rec <= 1e-9, rec, 1e-9))
    res = solve_depressed_cubic(2.0, 1.0).residual
    rows.append(_row("special", "cubic residual", res <= 1e-12, res, 1e-12))
    return rows


SUITES = {
    "subordinator": suite_subordinator,
    "inverse": suite_inverse,
    "telegraph": suite_telegraph,
    "k3": suite_k3,
    "composition": suite_composition,
    "iterated": suite_iterated,
    "limit": suite_limit,
    "special": suite_special,
}


def run_suite(name, n_samples=20000, seed=12345):
    """Run one named suite (or ``all``) and return its check rows."""
    if name == "all":
        rows = []
        for key in SUITES:
            rows.extend(SUITES[key](n_samples, seed))
        return rows
    if name not in SUITES:
        raise ValueError(f"unknown suite: {name}")
    return SUITES[name](n_samples, seed)
