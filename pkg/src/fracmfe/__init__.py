"""fracmfe: solver and verification lab for the half-Laplacian
mean-field equation on the interval (-1, 1) with exterior condition 0.

Submodules are loaded lazily so the command-line entry point can
configure threading before numpy is imported.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("grid", "green", "halflap", "solver", "diagnostics",
               "serialize", "constants", "cli")

_API = {
    "grid": ["Grid", "Field", "build_grid", "integrate", "log_moment",
             "interpolate", "CHEBYSHEV_LOBATTO", "GRADED_COMPOSITE"],
    "green": ["green", "regular_part", "pohozaev_kernel", "KernelMatrix",
              "assemble_green_matrix", "green_apply_at", "weak_delta_test"],
    "halflap": ["pv_halflap", "fourier_halflap", "residual_check",
                "fourier_grid", "TruncationWarning"],
    "solver": ["SolveConfig", "SolveResult", "Branch", "apply_T",
               "picard_solve", "newton_solve", "solve", "continue_branch",
               "kernel_for"],
    "diagnostics": ["PohozaevReport", "BlowupProfile", "SymmetryReport",
                    "pohozaev_audit", "blowup_profile", "green_limit",
                    "symmetry_monotonicity", "bubble"],
}

_ATTR_TO_MODULE = {name: mod for mod, names in _API.items() for name in names}

__all__ = sorted(_ATTR_TO_MODULE) + list(_SUBMODULES)


def __getattr__(name):
    if name in _ATTR_TO_MODULE:
        module = importlib.import_module(f".{_ATTR_TO_MODULE[name]}",
                                         __name__)
        return getattr(module, name)
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
