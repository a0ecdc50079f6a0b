"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`Cyclotomic` is stored in the power basis ``1, z, ..., z^(phi(n)-1)``
of its smallest field ``Q(zeta_n)`` (``n`` is never 2 mod 4), with
``fractions.Fraction`` coefficients.  Canonical storage makes ``==`` exact,
which the constraint solver depends on.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Iterable, Mapping, Union

from .numtheory import divisors, factorize, lcm, mobius, phi

Rational = Fraction
Number = Union[int, Fraction, "Cyclotomic"]

__all__ = [
    "Cyclotomic",
    "Rational",
    "add",
    "cyclotomic_polynomial",
    "decode",
    "encode",
    "galois",
    "mul",
    "parse_rational",
    "root_of_unity",
    "scale",
    "trace_of_root",
    "trace_to_Q",
]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: Iterable[int]) -> list[int]:
    den = list(den)
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1]  # den is monic
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row ``e`` holds the coefficients of ``x^e mod Phi_n`` for ``0 <= e < n``."""
    deg = phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * poly[j]
    return tuple(rows)


def _reduce(n: int, terms: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Reduce ``sum c_e z_n^e`` (exponents taken mod n) to the power basis."""
    if n == 1:
        total = sum(terms.values(), Fraction(0))
        return {0: total} if total else {}
    deg = phi(n)
    table = _power_table(n)
    acc = [Fraction(0)] * deg
    for e, c in terms.items():
        if not c:
            continue
        e %= n
        if e < deg:
            acc[e] += c
        else:
            for j, v in enumerate(table[e]):
                if v:
                    acc[j] += c * v
    return {j: c for j, c in enumerate(acc) if c}


def _descend(n: int, coeffs: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Move a reduced element of Q(zeta_n) to its smallest cyclotomic field."""
    changed = True
    while changed and n > 1:
        changed = False
        for p, e in factorize(n):
            m = n // p
            if e > 1:
                # fixed field of {1 + j*m}: only exponents divisible by p survive
                cand = {x // p: c for x, c in coeffs.items() if x % p == 0}
            else:
                # n = m*p with gcd(m, p) = 1; split z_n^x = z_m^a * z_p^b
                inv_p = pow(p, -1, m) if m > 1 else 0
                inv_m = pow(m, -1, p)
                acc: dict[int, Fraction] = {}
                for x, c in coeffs.items():
                    a = (x * inv_p) % m if m > 1 else 0
                    b = (x * inv_m) % p
                    w = c if b == 0 else -c / (p - 1)
                    acc[a] = acc.get(a, Fraction(0)) + w
                cand = acc
            cand = _reduce(m, cand)
            lifted = _reduce(n, {x * p: c for x, c in cand.items()})
            if lifted == coeffs:
                n, coeffs = m, cand
                changed = True
                break
    return n, coeffs


class Cyclotomic:
    """Immutable element of a cyclotomic field, in canonical form."""

    __slots__ = ("_n", "_coeffs", "_hash")

    def __init__(self, conductor: int = 1, terms: Mapping[int, Any] | None = None) -> None:
        if conductor < 1:
            raise ValueError("conductor must be positive")
        raw = {int(e): Fraction(c) for e, c in (terms or {}).items()}
        n, coeffs = _descend(conductor, _reduce(conductor, raw))
        self._n = n
        self._coeffs = tuple(sorted(coeffs.items()))
        self._hash: int | None = None

    @classmethod
    def _canonical(cls, n: int, coeffs: dict[int, Fraction]) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj._n = n
        obj._coeffs = tuple(sorted(coeffs.items()))
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x: Number) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            q = Fraction(x)
            return cls._canonical(1, {0: q} if q else {})
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclotomic")

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def is_rational(self) -> bool:
        return self._n == 1

    def is_integer(self) -> bool:
        return self._n == 1 and self.to_rational().denominator == 1

    def to_rational(self) -> Fraction:
        if self._n != 1:
            raise ValueError(f"{self} is not rational")
        return self._coeffs[0][1] if self._coeffs else Fraction(0)

    def lift(self, n: int) -> dict[int, Fraction]:
        """Exponent map of this value written over z_n (n a multiple of the conductor)."""
        if n % self._n:
            raise ValueError(f"conductor {self._n} does not divide {n}")
        f = n // self._n
        return {e * f: c for e, c in self._coeffs}

    def __add__(self, other: Number) -> "Cyclotomic":
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        n = lcm(self._n, other._n)
        terms = self.lift(n)
        for e, c in other.lift(n).items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Cyclotomic(n, terms)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic._canonical(self._n, {e: -c for e, c in self._coeffs})

    def __sub__(self, other: Number) -> "Cyclotomic":
        try:
            return self + (-Cyclotomic.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: Number) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other: Number) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            return scale(self, Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other._n == 1:
            return scale(self, other.to_rational())
        if self._n == 1:
            return scale(other, self.to_rational())
        n = lcm(self._n, other._n)
        a, b = self.lift(n), other.lift(n)
        terms: dict[int, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = (ea + eb) % n
                terms[e] = terms.get(e, Fraction(0)) + ca * cb
        return Cyclotomic(n, terms)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        return galois(self, -1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.coerce(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._n == other._n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            if self._n == 1:
                self._hash = hash(self.to_rational())
            else:
                self._hash = hash((self._n, self._coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __complex__(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * e / self._n) for e, c in self._coeffs),
            0j,
        )

    def __repr__(self) -> str:
        if self._n == 1:
            return f"Cyclotomic({self.to_rational()})"
        return f"Cyclotomic({self._n}, {dict(self._coeffs)})"

    def __str__(self) -> str:
        if self._n == 1:
            return str(self.to_rational())
        parts = []
        for e, c in self._coeffs:
            mon = "1" if e == 0 else f"z{self._n}^{e}"
            parts.append(f"{c}*{mon}" if c != 1 else mon)
        return " + ".join(parts)


def root_of_unity(n: int, j: int = 1) -> Cyclotomic:
    if n < 1:
        raise ValueError("n must be positive")
    return Cyclotomic(n, {j % n: 1})


def add(a: Number, b: Number) -> Cyclotomic:
    return Cyclotomic.coerce(a) + b


def mul(a: Number, b: Number) -> Cyclotomic:
    return Cyclotomic.coerce(a) * b


def scale(a: Number, r: Fraction | int) -> Cyclotomic:
    a = Cyclotomic.coerce(a)
    r = Fraction(r)
    if not r:
        return Cyclotomic._canonical(1, {})
    return Cyclotomic._canonical(a.conductor, {e: c * r for e, c in a.coeffs.items()})


def galois(a: Number, k: int) -> Cyclotomic:
    """Apply sigma_k: z -> z^k.  Requires gcd(k, conductor) = 1."""
    a = Cyclotomic.coerce(a)
    n = a.conductor
    if gcd(k, n) != 1:
        raise ValueError(f"galois: gcd({k}, {n}) != 1")
    if n == 1:
        return a
    terms: dict[int, Fraction] = {}
    for e, c in a.coeffs.items():
        x = (e * k) % n
        terms[x] = terms.get(x, Fraction(0)) + c
    coeffs = _reduce(n, terms)
    return Cyclotomic._canonical(n, coeffs)


def trace_of_root(m: int, j: int) -> int:
    """Tr_{Q(zeta_m)/Q}(zeta_m^j) via the Moebius closed form."""
    if m < 1:
        raise ValueError("m must be positive")
    m0 = m // gcd(j % m, m) if j % m else 1
    return mobius(m0) * (phi(m) // phi(m0))


def trace_to_Q(a: Number, field: int | None = None) -> Fraction:
    """Trace of ``a`` from Q(zeta_field) down to Q.

    ``field`` defaults to the conductor of ``a``; any multiple of it is allowed.
    """
    a = Cyclotomic.coerce(a)
    n = a.conductor
    if field is None:
        field = n
    if field % n:
        raise ValueError(f"value of conductor {n} is not in Q(zeta_{field})")
    total = sum((c * trace_of_root(n, e) for e, c in a.coeffs.items()), Fraction(0))
    return total * (phi(field) // phi(n))


def trace_times_root(a: Number, m: int, j: int) -> Fraction:
    """Tr_{Q(zeta_m)/Q}(a * zeta_m^j) for ``a`` in Q(zeta_m); linear in ``a``."""
    return _trace_times_root(Cyclotomic.coerce(a), m, j % m)


@lru_cache(maxsize=1 << 16)
def _trace_times_root(a: "Cyclotomic", m: int, j: int) -> Fraction:
    return sum(
        (c * trace_of_root(m, e + j) for e, c in a.lift(m).items()), Fraction(0)
    )


# --- text encoding -------------------------------------------------------

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def encode(a: Number) -> str | dict[str, Any]:
    """Encode as ``"a/b"`` when rational, else ``{conductor, terms}``."""
    a = Cyclotomic.coerce(a)
    if a.is_rational():
        return format_rational(a.to_rational())
    return {
        "conductor": a.conductor,
        "terms": [[e, format_rational(c)] for e, c in sorted(a.coeffs.items())],
    }


def decode(obj: Any) -> Cyclotomic:
    """Inverse of :func:`encode`; accepts non-canonical input."""
    if isinstance(obj, (str, int)) and not isinstance(obj, bool):
        return Cyclotomic.coerce(parse_rational(obj))
    if isinstance(obj, Mapping):
        try:
            n = int(obj["conductor"])
            terms = obj["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad cyclotomic encoding: {obj!r}") from exc
        if n < 1:
            raise ValueError(f"bad conductor {n}")
        acc: dict[int, Fraction] = {}
        for item in terms:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ValueError(f"bad term {item!r}")
            e = int(item[0]) % n
            acc[e] = acc.get(e, Fraction(0)) + parse_rational(item[1])
        return Cyclotomic(n, acc)
    raise ValueError(f"bad cyclotomic encoding: {obj!r}")
