#!/usr/bin/env python3
"""Generate frozen high-precision Mittag-Leffler reference values.

Writes ``tests/data/mittag_leffler_reference.json``: 500 quasi-random
(Halton) points over {0.1 <= psi <= 2, |z| <= 50} with theta in [1/3, 2],
restricted to points whose true value fits in double precision.

Oracle routes, both in mpmath arbitrary precision:

* ``series``   - the defining sum, Kahan-free exact summation at a working
  precision sized to the largest term (~0.44 * |z|**(1/psi) digits), used
  whenever |z|**(1/psi) <= 1000;
* ``asymptotic`` - the exponentially-improved expansion summed to its
  smallest term, used otherwise; there |z|**(1/psi) > 1000 so the
  truncation error is below exp(-900) and the route is exact for all
  practical purposes.

Run time is a few minutes; the output is committed so tests stay fast.
"""

import json
import math
import os
import sys

import mpmath as mp


def halton(index, base):
    f, r = 1.0, 0.0
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


def growth_exponent(z, psi):
    """Largest Re w over the exponential branches w = z^(1/psi) e^(2 pi i k / psi)."""
    theta = mp.arg(z)
    best = -mp.inf
    for k in (-1, 0, 1):
        ang = theta + 2 * mp.pi * k
        if abs(ang) <= psi * mp.pi + 1e-15:
            w = abs(z) ** (1.0 / psi) * mp.exp(1j * ang / psi)
            best = max(best, w.real)
    return best


def oracle_series(z, psi, theta):
    peak_digits = int(0.44 * float(abs(z)) ** (1.0 / psi)) + 60
    mp.mp.dps = min(520, peak_digits)
    # exact conversion of the binary floats: the gamma arguments psi*k+theta
    # must be formed in working precision, or their double-rounding noise is
    # amplified by the huge cancelling terms
    psi = mp.mpf(psi)
    theta = mp.mpf(theta)
    s = mp.mpc(0)
    term = mp.mpc(1)
    k = 0
    floor = mp.mpf(10) ** (-mp.mp.dps + 8)
    while True:
        s += term * mp.rgamma(psi * k + theta)
        term *= z
        k += 1
        arg = psi * k + theta
        if k > 8 and arg > 2 and abs(term) * mp.rgamma(arg) < floor * max(1, abs(s)):
            break
        if k > 400000:
            raise RuntimeError("series oracle failed to converge")
    return s


def oracle_asymptotic(z, psi, theta):
    mp.mp.dps = 60
    psi = mp.mpf(psi)
    theta = mp.mpf(theta)
    acc = mp.mpc(0)
    zinv = 1 / z
    term = zinv
    prev = mp.inf
    for j in range(1, 400):
        contrib = term * mp.rgamma(theta - psi * j)
        if abs(contrib) > prev and j > 3:
            break
        acc -= contrib
        prev = abs(contrib)
        term *= zinv
    arg = mp.arg(z)
    if abs(arg) <= psi * mp.pi * (1 + 1e-15):
        w = abs(z) ** (1.0 / psi) * mp.exp(1j * arg / psi)
        if w.real > -2000:
            acc += (1 / psi) * w ** (1 - theta) * mp.exp(w)
    return acc


def main():
    out_path = os.path.join(
        os.path.dirname(__file__), "..", "tests", "data",
        "mittag_leffler_reference.json",
    )
    points = []
    idx = 1
    while len(points) < 500:
        psi = 0.1 + 1.9 * halton(idx, 2)
        theta = 1.0 / 3.0 + (2.0 - 1.0 / 3.0) * halton(idx, 3)
        radius = 50.0 * math.sqrt(halton(idx, 5))
        angle = 2.0 * math.pi * halton(idx, 7) - math.pi
        idx += 1
        z = mp.mpc(radius * math.cos(angle), radius * math.sin(angle))
        if abs(z) < 1e-12:
            continue
        growth = growth_exponent(z, psi)
        if growth > 690:  # value overflows float64
            continue
        w_mag = float(abs(z)) ** (1.0 / min(psi, 1.0))
        route = "series" if (psi > 1.0 or w_mag <= 1000.0) else "asymptotic"
        try:
            val = (
                oracle_series(z, psi, theta)
                if route == "series"
                else oracle_asymptotic(z, psi, theta)
            )
        except RuntimeError:
            continue
        fv = complex(val)
        if not (
            math.isfinite(fv.real)
            and math.isfinite(fv.imag)
            and abs(fv) < 1e290
            and abs(fv) > 1e-290
        ):
            continue
        points.append(
            {
                "psi": psi,
                "theta": theta,
                "z_re": float(z.real),
                "z_im": float(z.imag),
                "ref_re": fv.real,
                "ref_im": fv.imag,
                "route": route,
            }
        )
        if len(points) % 50 == 0:
            print(f"{len(points)} points done (index {idx})", flush=True)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with open(out_path, "w") as fh:
        json.dump(points, fh, indent=1)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    sys.exit(main())
