"""Selects the box-scan kernel at import time.

The compiled kernel (``helpkit._scan``) is used when it was built and the
problem fits in 64-bit arithmetic; otherwise the pure-Python kernel runs.
Set ``HELPKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from typing import Callable, Sequence

from . import _scan_py

__all__ = ["BACKEND", "fits_int64", "scan", "scan_python"]

ScanFn = Callable[..., list]

_compiled: ScanFn | None = None
if not os.environ.get("HELPKIT_PURE_PYTHON"):
    try:
        from ._scan import scan as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
scan_python: ScanFn = _scan_py.scan

_LIMIT = 1 << 62


def fits_int64(
    consts: Sequence[int],
    coefs: Sequence[Sequence[int]],
    divs: Sequence[int],
    uppers: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
) -> bool:
    """Conservative check that no numerator or congruence product overflows."""
    if not consts:
        return True
    reach = [max(abs(l), abs(h)) + 1 for l, h in zip(lo, hi)]
    worst = 0
    for c, row, u in zip(consts, coefs, uppers):
        b = abs(c) + abs(u) + sum(abs(a) * x for a, x in zip(row, reach))
        worst = max(worst, b)
    return worst * (max(divs) + 1) < _LIMIT


def scan(
    consts: Sequence[int],
    coefs: Sequence[Sequence[int]],
    divs: Sequence[int],
    uppers: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
) -> list[tuple[int, ...]]:
    """All integer points of the box ``[lo, hi]`` accepted by every row."""
    if _compiled is not None and fits_int64(consts, coefs, divs, uppers, lo, hi):
        return _compiled(consts, coefs, divs, uppers, lo, hi)
    return scan_python(consts, coefs, divs, uppers, lo, hi)
