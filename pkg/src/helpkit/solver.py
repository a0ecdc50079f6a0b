"""Exact enumeration of the integer solutions of a constraint system.

The normalization sum(nu) = 1 is used to eliminate the last variable.  A box
around the remaining polytope comes from exact Fourier-Motzkin elimination;
if the rows do not pin down every direction the system is reported as
unbounded together with a recession direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import Mapping, Sequence

from . import kernels
from .constraints import AugTuple, ConstraintSystem, Tower

__all__ = [
    "Box",
    "FeasibleSet",
    "Unbounded",
    "Verification",
    "derive_box",
    "enumerate_solutions",
    "solve",
    "verify",
]

ROW_CAP = 10_000


class Unbounded(Exception):
    """The selected characters do not bound the system; ``ray`` is a recession direction."""

    def __init__(self, ray: Mapping[str, Fraction]) -> None:
        self.ray = dict(ray)
        shown = ", ".join(f"{k}: {v}" for k, v in self.ray.items())
        super().__init__(f"constraint system is unbounded along {{{shown}}}")


@dataclass(frozen=True)
class Box:
    variables: tuple[str, ...]
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    @property
    def empty(self) -> bool:
        # with no variables the normalization sum(nu) = 1 cannot hold
        return not self.variables or any(l > h for l, h in zip(self.lo, self.hi))

    def bounds(self, name: str) -> tuple[int, int]:
        i = self.variables.index(name)
        return self.lo[i], self.hi[i]

    def size(self) -> int:
        if self.empty:
            return 0
        out = 1
        for l, h in zip(self.lo[:-1], self.hi[:-1]):
            out *= h - l + 1
        return out


@dataclass(frozen=True)
class FeasibleSet:
    order: int
    tower: Tower
    variables: tuple[str, ...]
    points: tuple[tuple[int, ...], ...]

    @property
    def tuples(self) -> list[AugTuple]:
        return [AugTuple.of(self.order, dict(zip(self.variables, p))) for p in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)

    def bounds(self, name: str) -> tuple[int, int] | None:
        if not self.points:
            return None
        i = self.variables.index(name)
        vals = [p[i] for p in self.points]
        return min(vals), max(vals)


# --- integer rows ----------------------------------------------------------


def _integer_rows(system: ConstraintSystem) -> tuple[list[int], list[list[int]], list[int], list[int]]:
    """Rows (c, a, D, U*D) over all variables: the form equals (c + a.nu)/D."""
    consts, coefs, divs, uppers = [], [], [], []
    for row in system.rows:
        f = row.form
        terms = [f.constant] + [f.coeff(v) for v in system.variables]
        d = lcm(*(t.denominator for t in terms))
        consts.append(int(f.constant * d))
        coefs.append([int(f.coeff(v) * d) for v in system.variables])
        divs.append(d)
        uppers.append(row.upper * d)
    return consts, coefs, divs, uppers


def _reduce(consts, coefs):
    """Substitute nu_last = 1 - sum(others): returns rows over the free variables."""
    rc, ra = [], []
    for c, row in zip(consts, coefs):
        a_last = row[-1]
        rc.append(c + a_last)
        ra.append([a - a_last for a in row[:-1]])
    return rc, ra


# --- exact linear algebra ----------------------------------------------------


def _null_vector(rows: Sequence[Sequence[int]], n: int) -> list[Fraction] | None:
    """A nonzero rational vector v with rows . v = 0, or None if the rank is n."""
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    v = [Fraction(0)] * n
    v[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        v[pc] = -mat[i][fc]
    return v


def _independent_rows(rows: Sequence[Sequence[int]], n: int) -> list[int]:
    """Indices of n linearly independent rows (caller guarantees full rank)."""
    basis: list[list[Fraction]] = []
    lead: list[int] = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, col in zip(basis, lead):
            if v[col]:
                f = v[col]
                v = [x - f * y for x, y in zip(v, b)]
        col = next((i for i, x in enumerate(v) if x), None)
        if col is None:
            continue
        inv = 1 / v[col]
        basis.append([x * inv for x in v])
        lead.append(col)
        chosen.append(idx)
        if len(chosen) == n:
            break
    return chosen


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


# --- Fourier-Motzkin -------------------------------------------------------

Ineq = tuple[tuple[Fraction, ...], Fraction]  # a . x <= b


class _CapExceeded(Exception):
    pass


def _normalize(ineqs: list[Ineq]) -> list[Ineq] | None:
    """Scale each row so its first nonzero |coefficient| is 1; keep the tightest per direction.

    Returns None when a constant row is violated (the system is infeasible).
    """
    best: dict[tuple[Fraction, ...], Fraction] = {}
    for a, b in ineqs:
        lead = next((x for x in a if x), None)
        if lead is None:
            if b < 0:
                return None
            continue
        s = abs(lead)
        key = tuple(x / s for x in a)
        val = b / s
        if key not in best or val < best[key]:
            best[key] = val
    return list(best.items())


def _fm_bounds(ineqs: list[Ineq], target: int, n: int, cap: int) -> tuple[Fraction, Fraction] | None:
    """Bounds on x[target] implied by ``ineqs`` (None if infeasible)."""
    current = _normalize(ineqs)
    if current is None:
        return None
    remaining = [j for j in range(n) if j != target]
    while remaining:
        # eliminate the variable producing the fewest new rows
        def cost(j: int) -> int:
            pos = sum(1 for a, _ in current if a[j] > 0)
            neg = sum(1 for a, _ in current if a[j] < 0)
            return pos * neg - pos - neg

        j = min(remaining, key=cost)
        remaining.remove(j)
        pos = [(a, b) for a, b in current if a[j] > 0]
        neg = [(a, b) for a, b in current if a[j] < 0]
        nxt = [(a, b) for a, b in current if a[j] == 0]
        if len(nxt) + len(pos) * len(neg) > cap:
            raise _CapExceeded
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = ap[j], -an[j]
                a = tuple(fn * x + fp * y for x, y in zip(ap, an))
                nxt.append((a, fn * bp + fp * bn))
        current = _normalize(nxt)
        if current is None:
            return None
    lo, hi = None, None
    for a, b in current:
        c = a[target]
        if c > 0:
            hi = b / c if hi is None else min(hi, b / c)
        elif c < 0:
            v = b / c
            lo = v if lo is None else max(lo, v)
    if lo is None or hi is None:
        raise ArithmeticError("elimination left a free direction")
    return lo, hi


def _basis_bounds(consts, coefs, uppers, n: int) -> list[tuple[Fraction, Fraction]]:
    """Interval bounds from n independent rows: x = A^-1 y with each y in its row range."""
    idx = _independent_rows(coefs, n)
    inv = _invert([[Fraction(x) for x in coefs[i]] for i in idx])
    ranges = [(Fraction(-consts[i]), Fraction(uppers[i] - consts[i])) for i in idx]
    out = []
    for row in inv:
        lo = sum((m * (r[0] if m > 0 else r[1]) for m, r in zip(row, ranges)), Fraction(0))
        hi = sum((m * (r[1] if m > 0 else r[0]) for m, r in zip(row, ranges)), Fraction(0))
        out.append((lo, hi))
    return out


def derive_box(system: ConstraintSystem, cap: int = ROW_CAP) -> Box:
    """A finite box containing every integer solution; raises :class:`Unbounded`."""
    names = system.variables
    nv = len(names)
    if nv == 0:
        return Box((), (), ())
    consts, coefs, _, uppers = _integer_rows(system)
    if nv == 1:
        return Box(names, (1,), (1,))
    rc, ra = _reduce(consts, coefs)
    n = nv - 1
    ray = _null_vector(ra, n) if ra else [Fraction(int(j == 0)) for j in range(n)]
    if ray is not None:
        full = list(ray) + [-sum(ray, Fraction(0))]
        raise Unbounded(dict(zip(names, full)))

    # add y = 1 - sum(x) as an extra coordinate so the last variable is bounded too
    ineqs: list[Ineq] = []
    for c, a, u in zip(rc, ra, uppers):
        fa = tuple(Fraction(x) for x in a) + (Fraction(0),)
        ineqs.append((tuple(-x for x in fa), Fraction(c)))  # -(a.x) <= c
        ineqs.append((fa, Fraction(u - c)))  # a.x <= u - c
    link = tuple(Fraction(1) for _ in range(n)) + (Fraction(1),)
    ineqs.append((link, Fraction(1)))
    ineqs.append((tuple(-x for x in link), Fraction(-1)))

    lo: list[int] = []
    hi: list[int] = []
    fallback = None
    for t in range(nv):
        try:
            b = _fm_bounds(ineqs, t, nv, cap)
        except _CapExceeded:
            if fallback is None:
                fallback = _basis_bounds(rc, ra, uppers, n)
                fallback.append(
                    (1 - sum((h for _, h in fallback), Fraction(0)), 1 - sum((l for l, _ in fallback), Fraction(0)))
                )
            b = fallback[t]
        if b is None:
            return Box(names, (1,) * nv, (0,) * nv)
        lo.append(ceil(b[0]))
        hi.append(floor(b[1]))
    return Box(names, tuple(lo), tuple(hi))


def enumerate_solutions(system: ConstraintSystem, box: Box) -> FeasibleSet:
    """Every integer point of ``box`` at which all forms are integers in [0, deg]."""
    names = system.variables
    nv = len(names)
    if box.empty:
        return FeasibleSet(system.order, system.tower, names, ())
    consts, coefs, divs, uppers = _integer_rows(system)
    if nv == 1:
        pts = kernels.scan([c + r[0] for c, r in zip(consts, coefs)], [[] for _ in consts], divs, uppers, [], [])
        return FeasibleSet(system.order, system.tower, names, ((1,),) if pts else ())
    rc, ra = _reduce(consts, coefs)
    raw = kernels.scan(rc, ra, divs, uppers, list(box.lo[:-1]), list(box.hi[:-1]))
    lo_last, hi_last = box.lo[-1], box.hi[-1]
    points = []
    for p in raw:
        last = 1 - sum(p)
        if lo_last <= last <= hi_last:
            points.append((*p, last))
    return FeasibleSet(system.order, system.tower, names, tuple(points))


def solve(system: ConstraintSystem, cap: int = ROW_CAP) -> FeasibleSet:
    return enumerate_solutions(system, derive_box(system, cap))


@dataclass(frozen=True)
class Verification:
    ok: bool
    values: tuple[tuple[tuple[str, int], Fraction], ...]
    violation: tuple[str, int] | None = None


def verify(system: ConstraintSystem, values: Mapping[str, int]) -> Verification:
    """Evaluate every form exactly; stops at the first violation."""
    if sum(values.get(v, 0) for v in system.variables) != 1:
        return Verification(False, (), ("normalization", 0))
    out = []
    for row in system.rows:
        mu = row.form.evaluate(values)
        out.append((row.label, mu))
        if mu.denominator != 1 or not 0 <= mu <= row.upper:
            return Verification(False, tuple(out), row.label)
    return Verification(True, tuple(out))
