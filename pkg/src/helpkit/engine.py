"""Divisor-lattice recursion and the order, spectrum and prime-graph verdicts.

A unit ``u`` of order ``k`` is described by its own partial augmentations
together with those of every proper power ``u^d`` (its tower).  Feasible
units of each order ``m | k`` are computed once and reused: a tower of order
``k`` is assembled from one feasible unit for each maximal divisor ``k/p``,
and two such choices are compatible when they agree on every common power.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .constraints import (
    AffineForm,
    AugTuple,
    ConstraintError,
    Tower,
    admissible_classes,
    build_system,
    chi_of_tuple,
    mu_form,
)
from .numtheory import divisors, factorize, prime_divisors
from .solver import FeasibleSet, Unbounded, solve
from .tables import Character, CharacterTable, PrimeGraph, element_orders, prime_graph

__all__ = [
    "Engine",
    "KimmerleReport",
    "OrderVerdict",
    "Selection",
    "SpectrumEntry",
    "SpectrumReport",
    "Status",
    "alpha_table",
    "candidate_orders",
    "default_characters",
    "feasible_towers",
    "kimmerle",
    "order_verdict",
    "spectrum",
    "substitute",
]


class Status(str, Enum):
    EXCLUDED = "Excluded"
    RATIONALLY_TRIVIAL = "RationallyTrivial"
    OPEN = "Open"


# --- character selection ---------------------------------------------------


def default_characters(table: CharacterTable, k: int) -> list[Character]:
    """Every non-suspect character usable at order k.

    Usable means: ordinary, or p-Brauer with p not dividing k, and with a known
    value on every admissible class.
    """
    classes = admissible_classes(table, k)
    out = []
    for ch in table.all_characters():
        if ch.suspect or (ch.prime and k % ch.prime == 0):
            continue
        if ch.defined_on(classes):
            out.append(ch)
    return out


@dataclass(frozen=True)
class Selection:
    """Which characters constrain each order.

    ``mode`` is ``"all"`` (every usable non-suspect character), ``"profile"``
    (the table's stored per-order selection where present) or ``"explicit"``
    (``explicit[m]`` where present).  Orders without an entry fall back to
    ``"all"``.
    """

    mode: str = "all"
    explicit: tuple[tuple[int, tuple[str, ...]], ...] = ()

    @classmethod
    def all(cls) -> "Selection":
        return cls("all")

    @classmethod
    def profile(cls) -> "Selection":
        return cls("profile")

    @classmethod
    def of(cls, per_order: Mapping[int, Sequence[str]]) -> "Selection":
        return cls("explicit", tuple(sorted((int(m), tuple(v)) for m, v in per_order.items())))

    def keys_for(self, table: CharacterTable, m: int) -> tuple[str, ...] | None:
        if self.mode == "profile":
            return table.selections.get(m)
        if self.mode == "explicit":
            return dict(self.explicit).get(m)
        if self.mode == "all":
            return None
        raise ValueError(f"unknown selection mode {self.mode!r}")

    def policy(self, table: CharacterTable, m: int) -> list[Character]:
        keys = self.keys_for(table, m)
        if keys is None:
            return default_characters(table, m)
        return [table.character(key) for key in keys]


def _is_constant(ch: Character, classes: Sequence[str]) -> bool:
    return len({ch.value(c) for c in classes}) <= 1


def effective_selections(table: CharacterTable, k: int, selection: Selection) -> dict[int, tuple[Character, ...]]:
    """Characters used at every divisor m > 1 of k.

    A proper divisor keeps its own policy and also inherits each character used
    above it that separates its admissible classes, so that every value
    chi(u^d) needed higher up is determined by the lower level's variables.
    """
    eff: dict[int, tuple[Character, ...]] = {}
    for m in sorted((d for d in divisors(k) if d > 1), reverse=True):
        chosen = list(selection.policy(table, m))
        seen = {c.key for c in chosen}
        classes = admissible_classes(table, m)
        for parent in sorted(eff):
            if parent % m:
                continue
            for ch in eff[parent]:
                if ch.key not in seen and not _is_constant(ch, classes):
                    chosen.append(ch)
                    seen.add(ch.key)
        eff[m] = tuple(chosen)
    return eff


# --- per-level results -----------------------------------------------------


@dataclass(frozen=True)
class LevelResult:
    """All feasible units of one order, with the systems they came from."""

    order: int
    characters: tuple[str, ...]
    units: tuple[tuple[Tower, AugTuple], ...]
    solved: tuple[tuple[Tower, FeasibleSet], ...]
    unbounded: tuple[tuple[Tower, str], ...] = ()
    insufficient: bool = False


@dataclass(frozen=True)
class OrderVerdict:
    order: int
    status: Status
    towers_with_solutions: tuple[tuple[Tower, FeasibleSet], ...]
    selection: Mapping[int, tuple[str, ...]]
    towers_tried: int = 0
    note: str | None = None

    @property
    def tuples(self) -> list[AugTuple]:
        return [t for _, fs in self.towers_with_solutions for t in fs.tuples]


def _merge(base: dict[int, AugTuple], extra: Mapping[int, AugTuple]) -> dict[int, AugTuple] | None:
    out = dict(base)
    for m, t in extra.items():
        if m in out and out[m] != t:
            return None
        out[m] = t
    return out


class Engine:
    """Shares memoized level results across orders of one table.

    The memo supports concurrent use: each key is computed once, other
    threads asking for it wait for that computation.
    """

    def __init__(self, table: CharacterTable, cap: int | None = None) -> None:
        self.table = table
        self.cap = cap
        self._memo: dict[tuple, LevelResult] = {}
        self._pending: dict[tuple, threading.Event] = {}
        self._lock = threading.Lock()

    def _key(self, m: int, eff: Mapping[int, tuple[Character, ...]]) -> tuple:
        return (m,) + tuple((d, tuple(c.key for c in eff[d])) for d in divisors(m) if d > 1)

    def level(self, m: int, eff: Mapping[int, tuple[Character, ...]]) -> LevelResult:
        key = self._key(m, eff)
        while True:
            with self._lock:
                if key in self._memo:
                    return self._memo[key]
                event = self._pending.get(key)
                if event is None:
                    event = self._pending[key] = threading.Event()
                    owner = True
                else:
                    owner = False
            if not owner:
                event.wait()
                continue
            try:
                result = self._compute(m, eff)
                with self._lock:
                    self._memo[key] = result
                return result
            finally:
                with self._lock:
                    self._pending.pop(key, None)
                event.set()

    def towers(self, m: int, eff: Mapping[int, tuple[Character, ...]]) -> tuple[list[Tower], bool]:
        """All consistent towers of order m built from feasible lower levels."""
        maximal = sorted({m // p for p in prime_divisors(m)} - {1})
        assignments: list[dict[int, AugTuple]] = [{}]
        insufficient = False
        for d in maximal:
            sub = self.level(d, eff)
            insufficient = insufficient or sub.insufficient
            nxt = []
            for base in assignments:
                for tw, t in sub.units:
                    merged = _merge(base, {**tw.as_dict(), d: t})
                    if merged is not None:
                        nxt.append(merged)
            assignments = nxt
        return [Tower.of(m, a) for a in assignments], insufficient

    def _compute(self, m: int, eff: Mapping[int, tuple[Character, ...]]) -> LevelResult:
        chars = eff[m]
        towers, insufficient = self.towers(m, eff)
        by_sig: dict[tuple, list[Tower]] = {}
        for tw in towers:
            sig = tuple(chi_of_tuple(c, t) for c in chars for _, t in tw.tuples)
            by_sig.setdefault(sig, []).append(tw)
        units: list[tuple[Tower, AugTuple]] = []
        solved: list[tuple[Tower, FeasibleSet]] = []
        unbounded: list[tuple[Tower, str]] = []
        for group in by_sig.values():
            rep = group[0]
            system = build_system(self.table, m, rep, chars)
            try:
                fs = solve(system) if self.cap is None else solve(system, self.cap)
            except Unbounded as exc:
                unbounded.append((rep, str(exc)))
                continue
            for tw in group:
                for t in fs.tuples:
                    units.append((tw, t))
                if fs:
                    solved.append((tw, FeasibleSet(fs.order, tw, fs.variables, fs.points)))
        return LevelResult(
            m,
            tuple(c.key for c in chars),
            tuple(units),
            tuple(solved),
            tuple(unbounded),
            insufficient or bool(unbounded),
        )

    # --- verdicts --------------------------------------------------------

    def order_verdict(self, k: int, selection: Selection | None = None) -> OrderVerdict:
        selection = selection or Selection.all()
        eff = effective_selections(self.table, k, selection)
        res = self.level(k, eff)
        used = {m: tuple(c.key for c in eff[m]) for m in sorted(eff)}
        towers_tried = len(self.towers(k, eff)[0])
        if res.insufficient:
            note = "insufficient constraints: " + "; ".join(
                f"order {k}: {msg}" for _, msg in res.unbounded
            ) if res.unbounded else "insufficient constraints at a proper power"
            return OrderVerdict(k, Status.OPEN, res.solved, used, towers_tried, note)
        if not res.units:
            return OrderVerdict(k, Status.EXCLUDED, (), used, towers_tried)
        trivial = all(
            t.is_trivial() and all(s.is_trivial() for _, s in tw.tuples) for tw, t in res.units
        )
        status = Status.RATIONALLY_TRIVIAL if trivial else Status.OPEN
        return OrderVerdict(k, status, res.solved, used, towers_tried)

    def feasible_towers(self, k: int, selection: Selection | None = None) -> list[tuple[Tower, FeasibleSet]]:
        eff = effective_selections(self.table, k, selection or Selection.all())
        return list(self.level(k, eff).solved)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HELPKIT_THREADS", "1")))
    except ValueError:
        return 1


def feasible_towers(table: CharacterTable, k: int, selection: Selection | None = None) -> list[tuple[Tower, FeasibleSet]]:
    return Engine(table).feasible_towers(k, selection)


def order_verdict(table: CharacterTable, k: int, selection: Selection | None = None) -> OrderVerdict:
    return Engine(table).order_verdict(k, selection)


# --- spectrum --------------------------------------------------------------


def candidate_orders(table: CharacterTable) -> tuple[set[int], set[int]]:
    """(non-element divisors of the exponent, element orders > 1)."""
    elems = element_orders(table)
    divs = {d for d in divisors(table.exponent) if d > 1}
    return divs - elems, divs & elems


def _two_primes(d: int) -> bool:
    f = factorize(d)
    return len(f) == 2 and all(e == 1 for _, e in f)


@dataclass(frozen=True)
class SpectrumEntry:
    order: int
    status: str  # element | excluded | excluded-by-closure | open
    via: int | None = None
    note: str | None = None


@dataclass(frozen=True)
class SpectrumReport:
    group: str
    entries: tuple[SpectrumEntry, ...]
    verdicts: Mapping[int, OrderVerdict] = field(default_factory=dict)

    def orders(self, status: str) -> list[int]:
        return [e.order for e in self.entries if e.status == status]

    @property
    def open(self) -> list[int]:
        return self.orders("open")

    @property
    def excluded(self) -> list[int]:
        return sorted(self.orders("excluded") + self.orders("excluded-by-closure"))


def _run_many(engine: Engine, orders: Iterable[int], selection: Selection) -> dict[int, OrderVerdict]:
    orders = sorted(orders)
    n = _threads()
    if n == 1 or len(orders) < 2:
        return {k: engine.order_verdict(k, selection) for k in orders}
    with ThreadPoolExecutor(max_workers=n) as pool:
        results = list(pool.map(lambda k: engine.order_verdict(k, selection), orders))
    return dict(zip(orders, results))


def spectrum(
    table: CharacterTable,
    selection: Selection | None = None,
    direct: str = "pq",
    engine: Engine | None = None,
) -> SpectrumReport:
    """Classify every divisor of the exponent.

    Non-element orders are attempted directly when they are a product of two
    distinct primes (``direct="pq"``) or always (``direct="all"``).  Multiples
    of an excluded order are then excluded by closure; the rest stay open.
    """
    selection = selection or Selection.all()
    engine = engine or Engine(table)
    non_elem, elem = candidate_orders(table)
    if direct == "pq":
        attempt = {d for d in non_elem if _two_primes(d)}
    elif direct == "all":
        attempt = set(non_elem)
    else:
        raise ValueError(f"unknown direct-attempt policy {direct!r}")
    verdicts = _run_many(engine, attempt, selection)
    excluded = {k for k, v in verdicts.items() if v.status is Status.EXCLUDED}
    entries = []
    for d in sorted(non_elem | elem):
        if d in elem:
            entries.append(SpectrumEntry(d, "element"))
        elif d in excluded:
            entries.append(SpectrumEntry(d, "excluded"))
        else:
            via = next((e for e in sorted(excluded) if d % e == 0), None)
            if via is not None:
                entries.append(SpectrumEntry(d, "excluded-by-closure", via))
            else:
                note = verdicts[d].note if d in verdicts else None
                entries.append(SpectrumEntry(d, "open", note=note))
    return SpectrumReport(table.group_name, tuple(entries), verdicts)


@dataclass(frozen=True)
class KimmerleReport:
    group_graph: PrimeGraph
    missing_edges: tuple[tuple[int, int], ...]
    verdicts: Mapping[tuple[int, int], OrderVerdict]

    @property
    def unresolved(self) -> list[tuple[int, int]]:
        return [e for e in self.missing_edges if self.verdicts[e].status is not Status.EXCLUDED]

    @property
    def confirmed(self) -> bool:
        return not self.unresolved


def kimmerle(
    table: CharacterTable, selection: Selection | None = None, engine: Engine | None = None
) -> KimmerleReport:
    """Attempt every order pq missing from the group's prime graph."""
    selection = selection or Selection.all()
    engine = engine or Engine(table)
    graph = prime_graph(table)
    primes = sorted(graph.vertices)
    missing = tuple(
        (p, q) for i, p in enumerate(primes) for q in primes[i + 1 :] if not graph.has_edge(p, q)
    )
    by_order = _run_many(engine, (p * q for p, q in missing), selection)
    return KimmerleReport(graph, missing, {(p, q): by_order[p * q] for p, q in missing})


# --- parametrized forms ----------------------------------------------------


def substitute(form: AffineForm, values: Mapping[str, int]) -> AffineForm:
    """Fix some variables of ``form`` to integers."""
    const = form.constant + sum((c * values[v] for v, c in form.coeffs if v in values), Fraction(0))
    coeffs = tuple((v, c) for v, c in form.coeffs if v not in values)
    return AffineForm(const, coeffs, form.divisor_k)


def alpha_table(
    table: CharacterTable,
    k: int,
    char: Character,
    power_order: int,
    fixed: Mapping[str, int],
    ls: Sequence[int],
    selection: Selection | None = None,
) -> list[tuple[AugTuple, tuple[int, ...]]]:
    """Constants k*mu_l after fixing ``fixed``, one row per feasible unit of order ``power_order``.

    Every other proper power must be determined uniquely (for instance a
    single class), as in a product of a prime-order class and a free factor.
    """
    engine = Engine(table)
    eff = effective_selections(table, k, selection or Selection.profile())
    towers, _ = engine.towers(k, eff)
    variables = admissible_classes(table, k)
    out = []
    for tw in towers:
        row = []
        for l in ls:
            form = substitute(mu_form(table, k, char, tw, l, variables), fixed)
            row.append(int(form.constant * k))
        out.append((tw.at(power_order), tuple(row)))
    return out


def check_tower_consistency(table: CharacterTable, tower: Tower) -> None:
    """Raise if a tower's tuples are not all of the orders they are filed under."""
    for m, t in tower.tuples:
        if t.order != m:
            raise ConstraintError(f"tuple filed at order {m} has order {t.order}")
