"""Pure-Python box scan; reference implementation of the enumeration kernel.

A row ``r`` accepts a point ``x`` when its numerator
``N = consts[r] + sum_j coefs[r][j] * x[j]`` satisfies ``N % divs[r] == 0``
and ``0 <= N <= uppers[r]`` (``uppers`` already multiplied by the divisor).

Outer variables are iterated as an odometer.  For the innermost variable the
admissible interval is cut down row by row, and a congruence taken from the
most selective row sets the stride.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

__all__ = ["scan"]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _congruence(coefs: Sequence[Sequence[int]], divs: Sequence[int], j: int) -> tuple[int, int, int, int] | None:
    """Pick the row whose congruence in variable ``j`` has the largest modulus.

    Returns ``(row, g, modulus, inverse)`` where ``a*x == -s (mod D)`` reduces to
    ``x == (-s/g) * inverse (mod modulus)``.
    """
    best = None
    for r, row in enumerate(coefs):
        a, d = row[j], divs[r]
        if a == 0 or d == 1:
            continue
        g = gcd(a, d)
        mod = d // g
        if mod > 1 and (best is None or mod > best[2]):
            best = (r, g, mod, pow((a // g) % mod, -1, mod))
    return best


def scan(
    consts: Sequence[int],
    coefs: Sequence[Sequence[int]],
    divs: Sequence[int],
    uppers: Sequence[int],
    lo: Sequence[int],
    hi: Sequence[int],
) -> list[tuple[int, ...]]:
    n = len(lo)
    nrows = len(consts)
    out: list[tuple[int, ...]] = []
    if any(l > h for l, h in zip(lo, hi)):
        return out
    if n == 0:
        if all(c % d == 0 and 0 <= c <= u for c, d, u in zip(consts, divs, uppers)):
            out.append(())
        return out

    last = n - 1
    inner = [coefs[r][last] for r in range(nrows)]
    cong = _congruence(coefs, divs, last)
    point = list(lo[:last])
    sums = [
        consts[r] + sum(coefs[r][j] * point[j] for j in range(last)) for r in range(nrows)
    ]

    while True:
        _scan_inner(sums, inner, divs, uppers, lo[last], hi[last], cong, point, out)
        # advance the odometer over the outer variables, updating partial sums
        j = last - 1
        while j >= 0:
            if point[j] < hi[j]:
                point[j] += 1
                for r in range(nrows):
                    sums[r] += coefs[r][j]
                break
            span = point[j] - lo[j]
            point[j] = lo[j]
            for r in range(nrows):
                sums[r] -= coefs[r][j] * span
            j -= 1
        if j < 0:
            return out


def _scan_inner(
    sums: list[int],
    inner: list[int],
    divs: Sequence[int],
    uppers: Sequence[int],
    x_lo: int,
    x_hi: int,
    cong: tuple[int, int, int, int] | None,
    point: list[int],
    out: list[tuple[int, ...]],
) -> None:
    for r, a in enumerate(inner):
        s = sums[r]
        if a == 0:
            if s % divs[r] or s < 0 or s > uppers[r]:
                return
        elif a > 0:
            x_lo = max(x_lo, _ceil_div(-s, a))
            x_hi = min(x_hi, (uppers[r] - s) // a)
        else:
            x_lo = max(x_lo, _ceil_div(uppers[r] - s, a))
            x_hi = min(x_hi, (-s) // a)
        if x_lo > x_hi:
            return
    step = 1
    if cong is not None:
        r, g, mod, inv = cong
        rhs = -sums[r]
        if rhs % g:
            return
        x0 = (rhs // g * inv) % mod
        x_lo += (x0 - x_lo) % mod
        step = mod
    for x in range(x_lo, x_hi + 1, step):
        for r, a in enumerate(inner):
            if a and (sums[r] + a * x) % divs[r]:
                break
        else:
            out.append((*point, x))
