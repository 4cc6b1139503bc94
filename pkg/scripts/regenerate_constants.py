#!/usr/bin/env python3
"""Regenerate the versioned constants file from independent oracles.

Each value is computed by a method independent of the package code path
it later cross-checks:

  c_G                 adaptive quadrature of the closed-form Green function
  torsion_at_0        Fourier-multiplier evaluation on a fine uniform grid
  gaussian_halflap_refs  principal-value quadrature at scattered points
  holder_C            dense scan of the regular-part increment ratio

Usage: python scripts/regenerate_constants.py [output.json]
"""

import json
import pathlib
import sys

import numpy as np
from scipy.integrate import quad

OUT = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
    pathlib.Path(__file__).resolve().parents[1]
    / "src" / "fracmfe" / "_constants.json")


def c_green_mass():
    def g0(y):
        return (np.log(np.sqrt(1.0 - y * y) + 1.0) - np.log(abs(y))) / np.pi

    val, err = quad(g0, -1.0, 1.0, points=[0.0], limit=500,
                    epsabs=1e-13, epsrel=1e-13)
    assert err < 1e-11
    return val


def torsion_at_zero():
    # Fourier-multiplier oracle on a fine grid; box large enough that the
    # 1/x^2 output tail images stay below the target accuracy
    L, N = 1024.0, 2**24
    h = 2.0 * L / N
    x = -L + h * np.arange(N)
    u = np.where(np.abs(x) < 1.0, np.sqrt(np.maximum(1.0 - x * x, 0.0)), 0.0)
    xi = 2.0 * np.pi * np.fft.fftfreq(N, d=h)
    w = np.real(np.fft.ifft(np.abs(xi) * np.fft.fft(u)))
    return float(w[N // 2])      # x = 0 sample


def pv_gaussian(x):
    u = lambda y: np.exp(-np.square(y))
    ux = u(x)
    # symmetric near field + adaptive far field out to infinity
    gx, gw = np.polynomial.legendre.leggauss(48)
    delta = 0.05
    t = 0.5 * delta + 0.5 * delta * gx
    near = 0.5 * delta * np.dot(gw, (2.0 * ux - u(x + t) - u(x - t)) / t**2)
    far = 0.0
    for a, b in ((-np.inf, x - delta), (x + delta, np.inf)):
        val, _ = quad(lambda y: (ux - u(y)) / (x - y)**2, a, b,
                      limit=500, epsabs=1e-12, epsrel=1e-12)
        far += val
    return (near + far) / np.pi


def holder_constant():
    def H(x, y):
        return np.log(np.sqrt((1.0 - x * x) * (1.0 - y * y)) + 1.0 - x * y) \
            / np.pi

    worst = 0.0
    xs = np.linspace(-0.999, 0.995, 401)
    ys = np.linspace(-0.9995, 0.9995, 399)
    for h in (1e-1, 1e-2, 1e-3, 1e-4):
        for x in xs:
            if x + h >= 1.0:
                continue
            ratio = np.abs(H(x + h, ys) - H(x, ys)) * np.sqrt(1.0 - ys * ys) \
                / np.sqrt(h)
            worst = max(worst, float(np.max(ratio)))
    return 1.5 * worst       # calibrated once, with headroom


def main():
    data = {
        "schema_version": 1,
        "generator": "scripts/regenerate_constants.py",
        "c_G": c_green_mass(),
        "torsion_at_0": torsion_at_zero(),
        "gaussian_halflap_refs": [[x, float(pv_gaussian(x))]
                                  for x in (0.0, 0.5, 1.5, 3.0)],
        "holder_C": holder_constant(),
    }
    OUT.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")
    for k, v in data.items():
        print(f"  {k}: {v}")


if __name__ == "__main__":
    main()
