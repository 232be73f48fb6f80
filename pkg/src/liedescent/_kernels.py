"""Kernel implementation selection.

The compiled extension (_kernel_c) is preferred when importable; the pure
Python module is the fallback. Set LIEDESCENT_PURE_PY=1 to force the
fallback, e.g. for benchmarking or debugging. Both implementations are
behaviour-identical and produce bit-identical results.
"""

import os

if os.environ.get("LIEDESCENT_PURE_PY"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

IMPL_NAME = _impl.IMPL_NAME

word_degree = _impl.word_degree
cyclic_canonical = _impl.cyclic_canonical
cyclic_reduce = _impl.cyclic_reduce
poly_add_scaled = _impl.poly_add_scaled
poly_mul = _impl.poly_mul
poly_bracket = _impl.poly_bracket
derivation_apply = _impl.derivation_apply
hom_apply = _impl.hom_apply
column_echelon = _impl.column_echelon
