"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``HYPERQUOT_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("HYPERQUOT_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import koszul_sort, layer_cohdegs, product_histogram
else:
    try:
        from ._kernels import koszul_sort, layer_cohdegs, product_histogram

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._pykernels import koszul_sort, layer_cohdegs, product_histogram

__all__ = ["BACKEND", "koszul_sort", "layer_cohdegs", "product_histogram"]
