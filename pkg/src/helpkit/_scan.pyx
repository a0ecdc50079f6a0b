# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled box scan with 64-bit integers.

Same contract and algorithm as :mod:`helpkit._scan_py`; the caller
(:mod:`helpkit.kernels`) only routes here when every intermediate numerator
provably fits in a signed 64-bit integer.
"""

from libc.stdlib cimport malloc, free

from ._scan_py import _congruence


cdef inline long long _floor_div(long long a, long long b) nogil:
    cdef long long q = a // b  # truncates under cdivision
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _ceil_div(long long a, long long b) nogil:
    return -_floor_div(-a, b)


cdef inline long long _mod(long long a, long long m) nogil:
    cdef long long r = a % m
    if r < 0:
        r += m
    return r


def scan(consts, coefs, divs, uppers, lo, hi):
    cdef Py_ssize_t n = len(lo)
    cdef Py_ssize_t nrows = len(consts)
    cdef Py_ssize_t r, j, last
    out = []
    if any(l > h for l, h in zip(lo, hi)):
        return out
    if n == 0:
        if all(c % d == 0 and 0 <= c <= u for c, d, u in zip(consts, divs, uppers)):
            out.append(())
        return out

    cdef long long *a = <long long *> malloc(nrows * n * sizeof(long long))
    cdef long long *sums = <long long *> malloc(nrows * sizeof(long long))
    cdef long long *d = <long long *> malloc(nrows * sizeof(long long))
    cdef long long *u = <long long *> malloc(nrows * sizeof(long long))
    cdef long long *pt = <long long *> malloc(n * sizeof(long long))
    cdef long long *plo = <long long *> malloc(n * sizeof(long long))
    cdef long long *phi = <long long *> malloc(n * sizeof(long long))
    if not (a and sums and d and u and pt and plo and phi):
        free(a); free(sums); free(d); free(u); free(pt); free(plo); free(phi)
        raise MemoryError()

    cdef long long x_lo, x_hi, x, s, ai, span, rhs, x0, step
    cdef int has_cong = 0
    cdef Py_ssize_t c_row = 0
    cdef long long c_g = 1, c_mod = 1, c_inv = 0
    cdef bint ok

    try:
        last = n - 1
        for r in range(nrows):
            d[r] = divs[r]
            u[r] = uppers[r]
            for j in range(n):
                a[r * n + j] = coefs[r][j]
        for j in range(n):
            plo[j] = lo[j]
            phi[j] = hi[j]
            pt[j] = lo[j]
        for r in range(nrows):
            s = consts[r]
            for j in range(last):
                s += a[r * n + j] * pt[j]
            sums[r] = s
        cong = _congruence(coefs, divs, last)
        if cong is not None:
            has_cong = 1
            c_row, c_g, c_mod, c_inv = cong

        while True:
            # innermost variable: intersect row intervals, then stride
            x_lo = plo[last]
            x_hi = phi[last]
            ok = True
            for r in range(nrows):
                ai = a[r * n + last]
                s = sums[r]
                if ai == 0:
                    if _mod(s, d[r]) != 0 or s < 0 or s > u[r]:
                        ok = False
                        break
                elif ai > 0:
                    x_lo = max(x_lo, _ceil_div(-s, ai))
                    x_hi = min(x_hi, _floor_div(u[r] - s, ai))
                else:
                    x_lo = max(x_lo, _ceil_div(u[r] - s, ai))
                    x_hi = min(x_hi, _floor_div(-s, ai))
                if x_lo > x_hi:
                    ok = False
                    break
            if ok:
                step = 1
                if has_cong:
                    rhs = -sums[c_row]
                    if _mod(rhs, c_g) != 0:
                        ok = False
                    else:
                        x0 = _mod((rhs // c_g) * c_inv, c_mod)
                        x_lo += _mod(x0 - x_lo, c_mod)
                        step = c_mod
                if ok:
                    x = x_lo
                    while x <= x_hi:
                        for r in range(nrows):
                            ai = a[r * n + last]
                            if ai != 0 and _mod(sums[r] + ai * x, d[r]) != 0:
                                break
                        else:
                            out.append(tuple([pt[j] for j in range(last)]) + (x,))
                        x += step

            j = last - 1
            while j >= 0:
                if pt[j] < phi[j]:
                    pt[j] += 1
                    for r in range(nrows):
                        sums[r] += a[r * n + j]
                    break
                span = pt[j] - plo[j]
                pt[j] = plo[j]
                for r in range(nrows):
                    sums[r] -= a[r * n + j] * span
                j -= 1
            if j < 0:
                return out
    finally:
        free(a); free(sums); free(d); free(u); free(pt); free(plo); free(phi)
