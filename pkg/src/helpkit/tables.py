"""Character table data model, file format and validation.

The on-disk format is a JSON document, optionally preceded by ``#`` comment
lines (used for provenance notes)::

    # comment lines
    {
      "group": {"name": "A5", "order": [[2, 2], [3, 1], [5, 1]], "exponent": 30},
      "partial": false,
      "classes": [{"name": "1a", "order": 1, "size": 1, "powermap": {"2": "1a"}}, ...],
      "characters": [{"id": "chi2", "degree": 3, "conductor": 5, "values": [...]}, ...],
      "brauer": {"2": {"classes": ["1a", ...], "characters": [...]}},
      "selections": {"17": ["chi7", "2:chi6"]},
      "rows": {"35": [["2:chi1+chi2+chi3+chi6+chi8", 0]]}
    }

Values use the encoding of :func:`helpkit.cyclo.encode`; ``null`` marks a
value that is unknown in a partial table.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import cyclo
from .cyclo import Cyclotomic
from .numtheory import factorize, lcm

__all__ = [
    "BrauerTable",
    "Character",
    "CharacterTable",
    "ConjugacyClass",
    "ParseError",
    "PrimeGraph",
    "TableError",
    "ValidationError",
    "char_label",
    "element_orders",
    "load",
    "parse",
    "power_class",
    "prime_graph",
    "serialize",
]

_LABEL = re.compile(r"^(\d+)([a-z]+)$")


class TableError(ValueError):
    """Base class for table problems; ``line`` anchors the diagnostic when known."""

    exit_code = 3

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}" if self.line else self.message


class ParseError(TableError):
    exit_code = 2


class ValidationError(TableError):
    exit_code = 3


@dataclass(frozen=True)
class ConjugacyClass:
    name: str
    order: int
    size: int | None
    powermap: Mapping[int, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Character:
    """A row of an ordinary (``prime == 0``) or Brauer table.

    ``values`` is aligned with ``classes``.  ``summands`` records the indices
    of a character sum such as (1,2,3,6,8) when the row is such a sum.
    """

    id: str
    degree: int
    prime: int
    classes: tuple[str, ...]
    values: tuple[Cyclotomic | None, ...]
    conductor: int = 1
    summands: tuple[int, ...] | None = None
    suspect: str | None = None
    note: str | None = None

    @property
    def key(self) -> str:
        return self.id if self.prime == 0 else f"{self.prime}:{self.id}"

    def value(self, class_name: str) -> Cyclotomic | None:
        try:
            return self.values[self.classes.index(class_name)]
        except ValueError:
            return None

    def defined_on(self, class_names: Iterable[str]) -> bool:
        return all(self.value(c) is not None for c in class_names)

    def __add__(self, other: "Character") -> "Character":
        if self.prime != other.prime or self.classes != other.classes:
            raise ValueError("can only add characters of the same table")
        vals = tuple(
            None if a is None or b is None else a + b
            for a, b in zip(self.values, other.values)
        )
        summands = None
        if self.summands is not None and other.summands is not None:
            summands = tuple(sorted(self.summands + other.summands))
        return Character(
            id=f"{self.id}+{other.id}",
            degree=self.degree + other.degree,
            prime=self.prime,
            classes=self.classes,
            values=vals,
            conductor=lcm(self.conductor, other.conductor),
            summands=summands,
        )


def char_label(ch: Character) -> str:
    """Label in the ``(1,2,3,6,8)_[2]`` style; ``[*]`` marks ordinary characters."""
    tag = "*" if ch.prime == 0 else str(ch.prime)
    if ch.summands:
        return "(" + ",".join(str(i) for i in ch.summands) + f")_[{tag}]"
    return f"{ch.id}_[{tag}]"


@dataclass(frozen=True)
class BrauerTable:
    prime: int
    regular_classes: tuple[str, ...]
    characters: tuple[Character, ...]


@dataclass(frozen=True)
class PrimeGraph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def has_edge(self, p: int, q: int) -> bool:
        return (min(p, q), max(p, q)) in self.edges


@dataclass(frozen=True)
class CharacterTable:
    group_name: str
    order_factorization: Mapping[int, int]
    exponent: int
    classes: tuple[ConjugacyClass, ...]
    ordinary: tuple[Character, ...]
    brauer: Mapping[int, BrauerTable]
    partial: bool = False
    comments: tuple[str, ...] = ()
    selections: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    rows: Mapping[int, tuple[tuple[str, int], ...]] = field(default_factory=dict)

    @property
    def order(self) -> int:
        out = 1
        for p, e in self.order_factorization.items():
            out *= p**e
        return out

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    def get_class(self, name: str) -> ConjugacyClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(f"unknown class {name!r}")

    def classes_of_order(self, m: int) -> list[str]:
        return [c.name for c in self.classes if c.order == m]

    def characters(self, prime: int = 0) -> tuple[Character, ...]:
        if prime == 0:
            return self.ordinary
        return self.brauer[prime].characters if prime in self.brauer else ()

    def all_characters(self) -> list[Character]:
        out = list(self.ordinary)
        for p in sorted(self.brauer):
            out.extend(self.brauer[p].characters)
        return out

    def character(self, key: str) -> Character:
        """Look up ``"chi2"`` (ordinary), ``"3:chi2"`` (3-Brauer) or a sum ``"2:1+2+3"``."""
        prime, _, ident = key.rpartition(":")
        p = _parse_prime_tag(prime) if prime else 0
        for ch in self.characters(p):
            if ch.id == ident:
                return ch
        if re.fullmatch(r"\d+(\+\d+)*", ident):
            return self.character_sum([int(i) for i in ident.split("+")], p)
        raise KeyError(f"unknown character {key!r}")

    def character_sum(self, summands: Sequence[int], prime: int = 0) -> Character:
        """Sum of ``chi_i`` for i in ``summands``, or a stored row with those summands."""
        want = tuple(sorted(summands))
        chars = self.characters(prime)
        for ch in chars:
            if ch.summands == want:
                return ch
        by_id = {ch.id: ch for ch in chars}
        try:
            parts = [by_id[f"chi{i}"] for i in want]
        except KeyError as exc:
            tag = "*" if prime == 0 else prime
            raise KeyError(f"character sum {want} unavailable in table [{tag}]") from exc
        total = parts[0]
        for ch in parts[1:]:
            total = total + ch
        return Character(
            id="+".join(f"chi{i}" for i in want),
            degree=total.degree,
            prime=prime,
            classes=total.classes,
            values=total.values,
            conductor=total.conductor,
            summands=want,
        )


def _parse_prime_tag(tag: str) -> int:
    if tag in ("*", "0", ""):
        return 0
    return int(tag)


# --- queries -------------------------------------------------------------


def power_class(table: CharacterTable, class_name: str, m: int) -> str:
    """Class of g^m for g in ``class_name``, chaining prime power maps."""
    if m < 1:
        raise ValueError("m must be positive")
    cls = table.get_class(class_name)
    m %= cls.order
    if m == 0:
        return "1a"
    name = class_name
    for p, e in factorize(m) if m > 1 else ():
        for _ in range(e):
            c = table.get_class(name)
            if c.order == 1:
                return name
            if p not in c.powermap:
                raise KeyError(f"power map for prime {p} missing on class {name}")
            name = c.powermap[p]
    return name


def element_orders(table: CharacterTable) -> set[int]:
    return {c.order for c in table.classes}


def prime_graph(table: CharacterTable) -> PrimeGraph:
    primes = sorted(table.order_factorization)
    orders = element_orders(table)
    edges = {
        (p, q) for i, p in enumerate(primes) for q in primes[i + 1 :] if p * q in orders
    }
    return PrimeGraph(frozenset(primes), frozenset(edges))


# --- parsing -------------------------------------------------------------


def _line_of(text: str, needle: str) -> int | None:
    idx = text.find(needle)
    return text.count("\n", 0, idx) + 1 if idx >= 0 else None


def load(path: str | Path) -> CharacterTable:
    return parse(Path(path).read_text(encoding="utf-8"))


def parse(text: str) -> CharacterTable:
    comments = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            body = stripped[1:]
            comments.append((body[1:] if body.startswith(" ") else body).rstrip())
        elif stripped:
            break
    # blank out comment lines so decoder line numbers match the file
    body = "\n".join("" if l.strip().startswith("#") else l for l in text.splitlines())
    if not body.strip():
        raise ParseError("unexpected end of input", line=text.count("\n") + 1)
    try:
        doc = json.loads(body)
    except json.JSONDecodeError as exc:
        msg = exc.msg
        if exc.pos >= len(body.rstrip()):
            msg = "unexpected end of input"
        raise ParseError(msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", line=1)
    try:
        table = _build(doc, tuple(comments))
    except TableError as exc:
        if exc.line is None and getattr(exc, "anchor", None):
            exc.line = _line_of(text, exc.anchor)  # type: ignore[attr-defined]
        raise
    try:
        validate(table)
    except TableError as exc:
        if exc.line is None and getattr(exc, "anchor", None):
            exc.line = _line_of(text, exc.anchor)  # type: ignore[attr-defined]
        raise
    return table


def _err(cls: type[TableError], message: str, anchor: str | None = None) -> TableError:
    exc = cls(message)
    exc.anchor = anchor  # type: ignore[attr-defined]
    return exc


def _require(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise _err(ParseError, f"missing field {key!r} in {where}")
    return doc[key]


def _build(doc: Mapping[str, Any], comments: tuple[str, ...]) -> CharacterTable:
    group = _require(doc, "group", "document")
    name = str(_require(group, "name", "group"))
    try:
        factorization = {int(p): int(e) for p, e in _require(group, "order", "group")}
        exponent = int(_require(group, "exponent", "group"))
    except (TypeError, ValueError) as exc:
        raise _err(ParseError, f"bad group header: {exc}", '"group"') from None
    partial = bool(doc.get("partial", False))

    classes = []
    seen: set[str] = set()
    for raw in _require(doc, "classes", "document"):
        cname = str(_require(raw, "name", "class"))
        anchor = f'"{cname}"'
        if cname in seen:
            raise _err(ParseError, f"duplicate class name {cname!r}", anchor)
        seen.add(cname)
        size = raw.get("size")
        pm = {int(p): str(t) for p, t in (raw.get("powermap") or {}).items()}
        classes.append(
            ConjugacyClass(cname, int(_require(raw, "order", cname)), None if size is None else int(size), pm)
        )
    names = tuple(c.name for c in classes)
    for c in classes:
        for p, target in c.powermap.items():
            if target not in seen:
                raise _err(
                    ValidationError, f"unknown class {target!r} in power map of {c.name}", f'"{target}"'
                )

    ordinary = tuple(_build_chars(doc.get("characters", []), 0, names))
    brauer = {}
    for p_raw, bt in (doc.get("brauer") or {}).items():
        p = int(p_raw)
        reg = tuple(str(n) for n in _require(bt, "classes", f"brauer {p}"))
        for n in reg:
            if n not in seen:
                raise _err(ValidationError, f"unknown class {n!r} in {p}-Brauer table", f'"{n}"')
        brauer[p] = BrauerTable(p, reg, tuple(_build_chars(bt.get("characters", []), p, reg)))

    selections = {int(k): tuple(v) for k, v in (doc.get("selections") or {}).items()}
    rows = {
        int(k): tuple((str(key), int(l)) for key, l in v)
        for k, v in (doc.get("rows") or {}).items()
    }
    return CharacterTable(
        group_name=name,
        order_factorization=factorization,
        exponent=exponent,
        classes=tuple(classes),
        ordinary=ordinary,
        brauer=brauer,
        partial=partial,
        comments=comments,
        selections=selections,
        rows=rows,
    )


def _build_chars(raw_chars: Iterable[Mapping[str, Any]], prime: int, names: tuple[str, ...]) -> Iterable[Character]:
    ids: set[str] = set()
    for raw in raw_chars:
        cid = str(_require(raw, "id", "character"))
        anchor = f'"{cid}"'
        if cid in ids:
            raise _err(ParseError, f"duplicate character id {cid!r}", anchor)
        ids.add(cid)
        values_raw = _require(raw, "values", cid)
        if len(values_raw) != len(names):
            raise _err(
                ParseError,
                f"character {cid}: {len(values_raw)} values for {len(names)} classes",
                anchor,
            )
        try:
            values = tuple(None if v is None else cyclo.decode(v) for v in values_raw)
        except ValueError as exc:
            raise _err(ParseError, f"character {cid}: {exc}", anchor) from None
        summands = raw.get("summands")
        yield Character(
            id=cid,
            degree=int(_require(raw, "degree", cid)),
            prime=prime,
            classes=names,
            values=values,
            conductor=int(raw.get("conductor", 1)),
            summands=None if summands is None else tuple(sorted(int(i) for i in summands)),
            suspect=raw.get("suspect"),
            note=raw.get("note"),
        )


# --- validation ----------------------------------------------------------


def validate(table: CharacterTable) -> None:
    """Check every table invariant; raises :class:`ValidationError`."""
    names = table.class_names
    ones = [c for c in table.classes if c.order == 1]
    if len(ones) != 1 or ones[0].name != "1a":
        raise _err(ValidationError, "exactly one class of order 1, named '1a', is required")
    if ones[0].size not in (None, 1):
        raise _err(ValidationError, "class 1a must have size 1", '"1a"')
    for c in table.classes:
        m = _LABEL.match(c.name)
        if not m or int(m.group(1)) != c.order:
            raise _err(ValidationError, f"class label {c.name!r} does not match order {c.order}", f'"{c.name}"')
        if c.size is not None and c.size < 1:
            raise _err(ValidationError, f"class {c.name} has non-positive size", f'"{c.name}"')

    order = table.order
    for p in table.order_factorization:
        if factorize(p) != ((p, 1),):
            raise _err(ValidationError, f"{p} in order factorization is not prime")
    orders = {c.order for c in table.classes}
    exp = lcm(*orders)
    if exp != table.exponent:
        raise _err(ValidationError, f"exponent {table.exponent} != lcm of element orders {exp}", '"exponent"')
    for o in orders:
        for p, _ in factorize(o) if o > 1 else ():
            if p not in table.order_factorization:
                raise _err(ValidationError, f"element order {o} has prime {p} not dividing |G|")

    exp_primes = [p for p, _ in factorize(table.exponent)] if table.exponent > 1 else []
    for c in table.classes:
        for p, target in c.powermap.items():
            if p not in exp_primes:
                raise _err(ValidationError, f"power map of {c.name} uses {p}, which does not divide the exponent", f'"{c.name}"')
            if target not in names:
                raise _err(ValidationError, f"unknown class {target!r} in power map of {c.name}", f'"{target}"')
            want = c.order // p if c.order % p == 0 else c.order
            got = table.get_class(target).order
            if got != want:
                raise _err(
                    ValidationError,
                    f"power map {c.name}^{p} -> {target} has order {got}, expected {want}",
                    f'"{c.name}"',
                )
        if not table.partial:
            missing = [p for p in exp_primes if p not in c.powermap]
            if missing:
                raise _err(ValidationError, f"class {c.name} lacks power maps for {missing}", f'"{c.name}"')

    sizes = [c.size for c in table.classes]
    if all(s is not None for s in sizes):
        if sum(sizes) != order:  # type: ignore[arg-type]
            raise _err(ValidationError, f"class sizes sum to {sum(sizes)}, group order is {order}")  # type: ignore[arg-type]
    elif not table.partial:
        raise _err(ValidationError, "class sizes are required for a full table")

    for p, bt in table.brauer.items():
        if p not in table.order_factorization:
            raise _err(ValidationError, f"Brauer table for {p}, which does not divide |G|")
        for n in bt.regular_classes:
            if table.get_class(n).order % p == 0:
                raise _err(ValidationError, f"class {n} is not {p}-regular", f'"{n}"')
    for ch in table.all_characters():
        _validate_character(table, ch)

    if not table.partial:
        _validate_full(table)


def _validate_character(table: CharacterTable, ch: Character) -> None:
    anchor = f'"{ch.id}"'
    if ch.degree < 1:
        raise _err(ValidationError, f"character {ch.key} has non-positive degree", anchor)
    if ch.value("1a") is not None and ch.value("1a") != ch.degree:
        raise _err(ValidationError, f"character {ch.key}: value at 1a differs from degree {ch.degree}", anchor)
    if table.exponent % ch.conductor:
        raise _err(ValidationError, f"character {ch.key}: conductor {ch.conductor} does not divide the exponent", anchor)
    for cname, v in zip(ch.classes, ch.values):
        if v is None:
            if not table.partial:
                raise _err(ValidationError, f"character {ch.key}: unknown value at {cname} in a full table", anchor)
            continue
        cord = table.get_class(cname).order
        if cord % v.conductor or ch.conductor % v.conductor:
            raise _err(
                ValidationError,
                f"character {ch.key}: value at {cname} has conductor {v.conductor} "
                f"(class order {cord}, declared conductor {ch.conductor})",
                anchor,
            )


def _validate_full(table: CharacterTable) -> None:
    names = table.class_names
    if len(table.ordinary) != len(names):
        raise _err(ValidationError, f"{len(table.ordinary)} ordinary characters for {len(names)} classes")
    order = table.order
    cols = [[ch.values[i] for ch in table.ordinary] for i in range(len(names))]
    for i, ci in enumerate(cols):
        for j in range(i, len(cols)):
            total = Cyclotomic()
            for a, b in zip(ci, cols[j]):
                total = total + a * b.conjugate()  # type: ignore[union-attr,operator]
            size = table.classes[i].size
            want = Fraction(order, size) if i == j else 0  # type: ignore[arg-type]
            if total != want:
                raise _err(
                    ValidationError,
                    f"column orthogonality fails for classes ({names[i]}, {names[j]}): got {total}, expected {want}",
                    f'"{names[i]}"',
                )
    for p, bt in table.brauer.items():
        if len(bt.characters) != len(bt.regular_classes):
            raise _err(ValidationError, f"{p}-Brauer table has {len(bt.characters)} characters for {len(bt.regular_classes)} regular classes")


# --- serialization -------------------------------------------------------


def _char_doc(ch: Character) -> dict[str, Any]:
    out: dict[str, Any] = {"id": ch.id, "degree": ch.degree, "conductor": ch.conductor}
    if ch.summands is not None:
        out["summands"] = list(ch.summands)
    if ch.suspect:
        out["suspect"] = ch.suspect
    if ch.note:
        out["note"] = ch.note
    out["values"] = [None if v is None else cyclo.encode(v) for v in ch.values]
    return out


def to_document(table: CharacterTable) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "group": {
            "name": table.group_name,
            "order": [[p, e] for p, e in sorted(table.order_factorization.items())],
            "exponent": table.exponent,
        },
        "partial": table.partial,
        "classes": [
            {
                "name": c.name,
                "order": c.order,
                "size": c.size,
                "powermap": {str(p): t for p, t in sorted(c.powermap.items())},
            }
            for c in table.classes
        ],
        "characters": [_char_doc(ch) for ch in table.ordinary],
        "brauer": {
            str(p): {
                "classes": list(bt.regular_classes),
                "characters": [_char_doc(ch) for ch in bt.characters],
            }
            for p, bt in sorted(table.brauer.items())
        },
    }
    if table.selections:
        doc["selections"] = {str(k): list(v) for k, v in sorted(table.selections.items())}
    if table.rows:
        doc["rows"] = {str(k): [list(r) for r in v] for k, v in sorted(table.rows.items())}
    return doc


def _compact(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def _dump(obj: Any, indent: int, depth: int) -> str:
    """JSON with the outer ``depth`` levels expanded and everything deeper on one line."""
    pad, inner = " " * indent, " " * (indent + 2)
    if depth == 0 or not isinstance(obj, (dict, list)) or not obj:
        return _compact(obj)
    if isinstance(obj, dict):
        items = [f"{inner}{json.dumps(k)}: {_dump(v, indent + 2, depth - 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    items = [inner + _dump(v, indent + 2, depth - 1) for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + pad + "]"


def serialize(table: CharacterTable) -> str:
    """Canonical text form: one class or character per line."""
    head = "".join(f"# {c}\n" if c else "#\n" for c in table.comments)
    doc = to_document(table)
    parts = []
    for key, value in doc.items():
        if key == "brauer" and value:
            blocks = [
                f'    {json.dumps(p)}: {{\n      "classes": {_compact(bt["classes"])},\n'
                f'      "characters": {_dump(bt["characters"], 6, 1)}\n    }}'
                for p, bt in value.items()
            ]
            parts.append('  "brauer": {\n' + ",\n".join(blocks) + "\n  }")
            continue
        depth = {"classes": 1, "characters": 1, "selections": 1, "rows": 1}.get(key, 0)
        parts.append(f"  {json.dumps(key)}: {_dump(value, 2, depth)}")
    return head + "{\n" + ",\n".join(parts) + "\n}\n"
