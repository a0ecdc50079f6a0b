"""Affine integrality constraints on partial augmentations.

For a candidate torsion unit ``u`` of order ``k`` and a character ``chi``
(ordinary, or p-Brauer with p not dividing k), every

    mu_l(u, chi) = 1/k * sum_{d | k} Tr_{Q(z^d)/Q}(chi(u^d) z^(-dl))

must be an integer between 0 and deg(chi).  The d = 1 term is linear in the
unknown partial augmentations of ``u``; the others are fixed once the
partial augmentations of the proper powers ``u^d`` (a *tower*) are fixed.

Variables are labelled by class names.  Classes on which every selected
character takes the same value can be merged into one variable whose label
joins the members with ``+`` (for example ``"19a+19b+19c"``); its value is
the sum of the members' partial augmentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import cyclo
from .cyclo import Cyclotomic
from .numtheory import divisors, factorize
from .tables import Character, CharacterTable

__all__ = [
    "AffineForm",
    "AugTuple",
    "ConstraintError",
    "ConstraintSystem",
    "Row",
    "Tower",
    "admissible_classes",
    "build_system",
    "chi_of_tuple",
    "group_classes",
    "mu_form",
    "mu_forms",
    "pq_table_row",
]


class ConstraintError(ValueError):
    pass


def admissible_classes(table: CharacterTable, k: int) -> list[str]:
    """Non-identity classes whose element order divides ``k``, in table order."""
    if k < 2:
        raise ConstraintError("k must be at least 2")
    return [c.name for c in table.classes if c.order > 1 and k % c.order == 0]


def group_classes(label: str) -> tuple[str, ...]:
    return tuple(label.split("+"))


@dataclass(frozen=True)
class AugTuple:
    """Partial augmentations of a unit of order ``order``; only nonzero entries are kept."""

    order: int
    entries: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, order: int, values: Mapping[str, int]) -> "AugTuple":
        return cls(order, tuple((c, int(v)) for c, v in values.items() if v))

    @classmethod
    def single(cls, order: int, label: str) -> "AugTuple":
        return cls(order, ((label, 1),))

    def get(self, label: str) -> int:
        for c, v in self.entries:
            if c == label:
                return v
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.entries)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.entries)

    def is_trivial(self) -> bool:
        """True when exactly one class (not a merged group) carries the augmentation."""
        return len(self.entries) == 1 and "+" not in self.entries[0][0]

    def __str__(self) -> str:
        inner = ", ".join(f"{c}={v}" for c, v in self.entries)
        return f"[{inner}]"


@dataclass(frozen=True)
class Tower:
    """Partial augmentations of the proper powers of ``u``: ``tuples[m]`` has order m."""

    order: int
    tuples: tuple[tuple[int, AugTuple], ...] = ()

    @classmethod
    def of(cls, order: int, tuples: Mapping[int, AugTuple]) -> "Tower":
        return cls(order, tuple(sorted(tuples.items())))

    def at(self, m: int) -> AugTuple:
        for d, t in self.tuples:
            if d == m:
                return t
        raise ConstraintError(f"tower of order {self.order} has no tuple for order {m}")

    def as_dict(self) -> dict[int, AugTuple]:
        return dict(self.tuples)

    def restrict(self, m: int) -> "Tower":
        return Tower(m, tuple((d, t) for d, t in self.tuples if m % d == 0 and d != m))


def trivial_tower(table: CharacterTable, class_name: str) -> tuple[Tower, AugTuple]:
    """The tower and tuple induced by an actual group element of ``class_name``."""
    from .tables import power_class

    k = table.get_class(class_name).order
    tuples = {}
    for d in divisors(k):
        if 1 < d < k:
            m = k // d
            tuples[m] = AugTuple.single(m, power_class(table, class_name, d))
    return Tower.of(k, tuples), AugTuple.single(k, class_name)


def _value(char: Character, label: str) -> Cyclotomic:
    """Value of ``char`` on a variable; merged classes must agree."""
    vals = set()
    for c in group_classes(label):
        v = char.value(c)
        if v is None:
            if c not in char.classes:
                raise ConstraintError(
                    f"class {c} is not in the class list of {char.key} "
                    f"(not {char.prime}-regular)"
                )
            raise ConstraintError(f"{char.key} has no known value on class {c}")
        vals.add(v)
    if len(vals) != 1:
        raise ConstraintError(f"{char.key} is not constant on the merged classes {label}")
    return vals.pop()


def chi_of_tuple(char: Character, t: AugTuple) -> Cyclotomic:
    """sum of nu_C * chi(C) over the entries of ``t``."""
    total = Cyclotomic()
    for label, nu in t.entries:
        if nu:
            total = total + _value(char, label) * nu
    return total


@dataclass(frozen=True)
class AffineForm:
    """constant + sum coeffs[v] * nu_v, with the 1/k prefactor already applied."""

    constant: Fraction
    coeffs: tuple[tuple[str, Fraction], ...]
    divisor_k: int

    def coeff(self, label: str) -> Fraction:
        for c, v in self.coeffs:
            if c == label:
                return v
        return Fraction(0)

    def evaluate(self, values: Mapping[str, int]) -> Fraction:
        return self.constant + sum(
            (v * values.get(c, 0) for c, v in self.coeffs), Fraction(0)
        )

    def scaled(self) -> tuple[int, dict[str, int]]:
        """Numerator form ``(c, a)`` so the form equals (c + a.nu) / k."""
        k = self.divisor_k
        const = self.constant * k
        coeffs = {c: v * k for c, v in self.coeffs}
        if const.denominator != 1 or any(v.denominator != 1 for v in coeffs.values()):
            raise ConstraintError("form is not integral after clearing 1/k")
        return int(const), {c: int(v) for c, v in coeffs.items()}

    def __str__(self) -> str:
        c, a = self.scaled()
        parts = []
        for name, v in a.items():
            if v:
                parts.append(f"{'-' if v < 0 else '+'} {abs(v)}*nu[{name}]")
        parts.append(f"{'-' if c < 0 else '+'} {abs(c)}")
        body = " ".join(parts)
        body = body[2:] if body.startswith("+ ") else "-" + body[2:]
        return f"1/{self.divisor_k} ({body})"


def _check_prime(char: Character, k: int) -> None:
    if char.prime and k % char.prime == 0:
        raise ConstraintError(f"{char.key}: Brauer prime {char.prime} divides the order {k}")


def mu_form(
    table: CharacterTable,
    k: int,
    char: Character,
    tower: Tower,
    l: int,
    variables: Sequence[str] | None = None,
) -> AffineForm:
    """The form mu_l(u, char) for a unit of order ``k`` whose proper powers are ``tower``."""
    if k < 2:
        raise ConstraintError("k must be at least 2")
    _check_prime(char, k)
    if variables is None:
        variables = admissible_classes(table, k)
    return _form(k, char.degree, _power_values(k, char, tower), _variable_values(char, variables), l)


def _power_values(k: int, char: Character, tower: Tower) -> list[tuple[int, Cyclotomic]]:
    """chi(u^d) for every proper power, keyed by the order m = k/d of u^d."""
    return [(m, chi_of_tuple(char, tower.at(m))) for m in divisors(k) if 1 < m < k]


def _variable_values(char: Character, variables: Sequence[str]) -> list[tuple[str, Cyclotomic]]:
    return [(v, _value(char, v)) for v in variables]


def _form(
    k: int,
    degree: int,
    powers: Sequence[tuple[int, Cyclotomic]],
    var_values: Sequence[tuple[str, Cyclotomic]],
    l: int,
) -> AffineForm:
    const = Fraction(degree)
    for m, chi_ud in powers:
        const += cyclo.trace_times_root(chi_ud, m, -l)
    coeffs = tuple((v, cyclo.trace_times_root(x, k, -l) / k) for v, x in var_values)
    return AffineForm(const / k, coeffs, k)


def mu_forms(
    table: CharacterTable, k: int, char: Character, tower: Tower, variables: Sequence[str] | None = None
) -> list[AffineForm]:
    """All forms mu_0 .. mu_{k-1} for one character, without deduplication."""
    return [mu_form(table, k, char, tower, l, variables) for l in range(k)]


def pq_table_row(table: CharacterTable, k: int, char: Character, l: int) -> tuple[int, int, int]:
    """The (m1, mp, mq) row for an order pq, p < q, with mu_l = (m1 + nu_p mp + nu_q mq)/pq.

    ``char`` must be constant on the classes of order p and on those of order q.
    """
    f = factorize(k)
    if len(f) != 2 or any(e != 1 for _, e in f):
        raise ConstraintError(f"{k} is not a product of two distinct primes")
    (p, _), (q, _) = f
    _check_prime(char, k)
    consts = []
    for r in (p, q):
        names = table.classes_of_order(r)
        if not names:
            raise ConstraintError(f"no classes of order {r}")
        vals = {_value(char, c) for c in names}
        if len(vals) != 1:
            raise ConstraintError(f"{char.key} is not constant on the classes of order {r}")
        consts.append(vals.pop())
    cp, cq = consts
    m1 = Fraction(char.degree) + cyclo.trace_times_root(cq, q, -l) + cyclo.trace_times_root(cp, p, -l)
    mp = cyclo.trace_times_root(cp, k, -l)
    mq = cyclo.trace_times_root(cq, k, -l)
    out = []
    for x in (m1, mp, mq):
        if x.denominator != 1:
            raise ConstraintError("non-integral table entry")
        out.append(int(x))
    return out[0], out[1], out[2]


@dataclass(frozen=True)
class Row:
    form: AffineForm
    upper: int
    label: tuple[str, int]  # (character key, l)


@dataclass(frozen=True)
class ConstraintSystem:
    order: int
    variables: tuple[str, ...]
    rows: tuple[Row, ...]
    tower: Tower = field(default_factory=lambda: Tower(0))

    def check(self, values: Mapping[str, int]) -> tuple[str, int] | None:
        """First violated row label, ``("normalization", 0)``, or None when feasible."""
        if sum(values.get(v, 0) for v in self.variables) != 1:
            return ("normalization", 0)
        for row in self.rows:
            mu = row.form.evaluate(values)
            if mu.denominator != 1 or not 0 <= mu <= row.upper:
                return row.label
        return None


def merge_classes(classes: Sequence[str], chars: Sequence[Character]) -> list[str]:
    """Group classes on which all ``chars`` agree; returns joined labels in table order."""
    groups: dict[tuple, list[str]] = {}
    for c in classes:
        sig = tuple(_value(ch, c) for ch in chars)
        groups.setdefault(sig, []).append(c)
    return ["+".join(members) for members in groups.values()]


@lru_cache(maxsize=4096)
def _fixing_residues(value: Cyclotomic) -> frozenset[int]:
    """Residues s mod conductor whose Galois automorphism fixes ``value``."""
    n = value.conductor
    return frozenset(s for s in range(1, n + 1) if gcd(s, n) == 1 and cyclo.galois(value, s) == value)


def _orbit_representatives(k: int, values: Iterable[Cyclotomic]) -> list[int]:
    """Smallest l of each orbit of l -> s*l, s running over units fixing every value.

    mu_l and mu_{s l} coincide for such s, so these l give every distinct form.
    """
    irrational = [v for v in set(values) if not v.is_rational()]
    units = [s for s in range(1, k) if gcd(s, k) == 1] or [1]
    stab = [s for s in units if all(s % v.conductor in _fixing_residues(v) for v in irrational)]
    seen: set[int] = set()
    reps = []
    for l in range(k):
        if l in seen:
            continue
        reps.append(l)
        seen.update(s * l % k for s in stab)
    return reps


def build_system(
    table: CharacterTable,
    k: int,
    tower: Tower,
    characters: Iterable[Character],
    merge: bool = True,
) -> ConstraintSystem:
    """All mu_l forms, l = 0..k-1, for ``characters``, deduplicated.

    With ``merge`` the variables are the groups of admissible classes that no
    selected character separates; otherwise one variable per class.
    """
    if k < 2:
        raise ConstraintError("k must be at least 2")
    chars = list(characters)
    for ch in chars:
        _check_prime(ch, k)
    classes = admissible_classes(table, k)
    variables = merge_classes(classes, chars) if merge else list(classes)
    seen: set[tuple] = set()
    rows = []
    for ch in chars:
        powers = _power_values(k, ch, tower)
        var_values = _variable_values(ch, variables)
        values = [x for _, x in powers] + [x for _, x in var_values]
        for l in _orbit_representatives(k, values):
            form = _form(k, ch.degree, powers, var_values, l)
            key = (form.constant, form.coeffs, ch.degree)
            if key in seen:
                continue
            seen.add(key)
            rows.append(Row(form, ch.degree, (ch.key, l)))
    return ConstraintSystem(k, tuple(variables), tuple(rows), tower)
