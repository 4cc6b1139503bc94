"""Derived reference constants, loaded from the versioned constants file.

The values are produced by independent adaptive oracles (see
scripts/regenerate_constants.py), never hand-entered, and are used by
tests and the CLI as cross-checks on the quadrature-based code paths.
"""

from __future__ import annotations

import json
from importlib import resources

_cache = None


def load():
    global _cache
    if _cache is None:
        with resources.files(__package__).joinpath("_constants.json").open() as fh:
            _cache = json.load(fh)
    return _cache


def version():
    return load()["schema_version"]


def green_mass():
    """int_I G_0(y) dy computed by adaptive quadrature of the closed form."""
    return load()["c_G"]


def torsion_at_zero():
    """Half-Laplacian of sqrt(1-x^2) (extended by 0) at x = 0, from the
    Fourier-multiplier oracle on a fine grid."""
    return load()["torsion_at_0"]


def gaussian_references():
    """(x, value) samples of the half-Laplacian of exp(-x^2) from the
    principal-value oracle."""
    return [tuple(p) for p in load()["gaussian_halflap_refs"]]


def holder_constant():
    """Calibrated constant C in |H(x+h,y) - H(x,y)| <= C sqrt(h)/sqrt(1-y^2)."""
    return load()["holder_C"]
