"""Backend selection for the F_p kernels.

The compiled extension is used when it was built; otherwise, or when
``ORBITCOSET_PURE_PYTHON`` is set to a non-empty value, the numpy fallback
is imported instead.  ``BACKEND`` names the active implementation.
"""
import os

from . import _fallback

if os.environ.get("ORBITCOSET_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _fpkernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

if _compiled is not None:
    rref_modp = _compiled.rref_modp
    monomial_eval = _compiled.monomial_eval
    BACKEND = "cython"
else:
    rref_modp = _fallback.rref_modp
    monomial_eval = _fallback.monomial_eval
    BACKEND = "python"


def available_backends():
    """Map backend name to its kernel module, for tests and benchmarks."""
    out = {"python": _fallback}
    if _compiled is not None:
        out["cython"] = _compiled
    else:
        try:
            from . import _fpkernels
        except ImportError:
            pass
        else:
            out["cython"] = _fpkernels
    return out


__all__ = ["BACKEND", "available_backends", "monomial_eval", "rref_modp"]
