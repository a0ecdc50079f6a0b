"""Command-line front end.

Every command builds a JSON-compatible report dictionary first; the text
output is rendered from that dictionary alone, so ``--format json`` output
can be turned back into the identical text with :func:`render_text`.

Exit codes: 0 success, 1 open verdict under ``--strict``, 2 parse error,
3 validation or usage error, 4 insufficient constraints (unbounded system).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, NoReturn, Sequence

from .constraints import ConstraintError, build_system, pq_table_row
from .engine import (
    Engine,
    OrderVerdict,
    Selection,
    Status,
    alpha_table,
    kimmerle,
    spectrum,
)
from .numtheory import factorize
from .solver import verify
from .tables import CharacterTable, TableError, char_label, load

__all__ = ["build_parser", "main", "render_text", "run"]

EXIT_OK, EXIT_OPEN, EXIT_PARSE, EXIT_INVALID, EXIT_UNBOUNDED = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


# --- table and selection resolution ----------------------------------------


def resolve_table_path(name: str) -> Path:
    """A file path, or the name of a bundled fixture such as ``He`` or ``ON.ctbl``."""
    path = Path(name)
    if path.exists():
        return path
    stem = name[:-5] if name.endswith(".ctbl") else name
    bundled = resources.files("helpkit") / "data" / f"{Path(stem).name}.ctbl"
    if bundled.is_file():
        return Path(str(bundled))
    raise UsageError(f"no such table file: {name}")


def _split(values: Sequence[str] | None) -> list[str]:
    out: list[str] = []
    for v in values or ():
        out.extend(p.strip() for p in v.split(",") if p.strip())
    return out


def explicit_keys(args: argparse.Namespace) -> list[str]:
    """Character keys named by ``--chars``, ``--brauer`` and ``--sum``."""
    keys = list(_split(getattr(args, "chars", None)))
    for item in _split(getattr(args, "brauer", None)):
        if ":" not in item:
            raise UsageError(f"--brauer expects p:character, got {item!r}")
        keys.append(item)
    for item in getattr(args, "sum", None) or ():
        body, _, prime = item.partition("@")
        if not body:
            raise UsageError(f"empty --sum {item!r}")
        keys.append(f"{prime}:{body}" if prime else body)
    return keys


def selection_for(args: argparse.Namespace, table: CharacterTable, k: int | None) -> Selection:
    keys = explicit_keys(args)
    if keys:
        if k is None:
            raise UsageError("--chars/--brauer/--sum need an order")
        for key in keys:
            table.character(key)  # fail early on unknown names
        return Selection.of({k: keys})
    if getattr(args, "profile", False):
        return Selection.profile()
    return Selection.all()


# --- report construction ---------------------------------------------------


def _num(x: Fraction | int) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _table_info(table: CharacterTable, path: Path) -> dict[str, Any]:
    return {"group": table.group_name, "path": str(path), "partial": table.partial}


def _verdict_report(table: CharacterTable, v: OrderVerdict, with_mu: bool) -> dict[str, Any]:
    chars = [table.character(key) for key in v.selection.get(v.order, ())]
    towers = []
    for tower, fs in v.towers_with_solutions:
        entry: dict[str, Any] = {
            "tower": {str(m): t.as_dict() for m, t in tower.tuples},
            "variables": list(fs.variables),
            "bounds": {name: list(fs.bounds(name)) for name in fs.variables},
            "tuples": [],
        }
        system = build_system(table, v.order, tower, chars) if with_mu else None
        for point in fs.points:
            values = dict(zip(fs.variables, point))
            item: dict[str, Any] = {"values": values}
            if system is not None:
                check = verify(system, values)
                item["mu"] = [[key, l, _num(mu)] for (key, l), mu in check.values]
                item["ok"] = check.ok
            entry["tuples"].append(item)
        towers.append(entry)
    return {
        "order": v.order,
        "status": v.status.value,
        "selection": {str(m): list(keys) for m, keys in v.selection.items()},
        "towers_tried": v.towers_tried,
        "solutions": len(v.tuples),
        "note": v.note,
        "towers": towers,
    }


def _order_report(args, table, path, kind: str) -> dict[str, Any]:
    k = args.k
    if k < 2:
        raise UsageError("the order must be at least 2")
    verdict = Engine(table).order_verdict(k, selection_for(args, table, k))
    return {
        "kind": kind,
        "table": _table_info(table, path),
        "result": _verdict_report(table, verdict, with_mu=not args.no_mu),
    }


def _pq_report(args, table, path) -> dict[str, Any]:
    k = args.k
    f = factorize(k)
    if len(f) != 2 or any(e != 1 for _, e in f):
        raise UsageError(f"{k} is not a product of two distinct primes")
    (p, _), (q, _) = f
    keys = explicit_keys(args)
    ls = [int(x) for x in _split(args.l)]
    if keys:
        pairs = [(key, l) for key in keys for l in (ls or range(k))]
    elif table.rows.get(k):
        pairs = [(key, l) for key, l in table.rows[k] if not ls or l in ls]
    else:
        raise UsageError(f"no stored rows for order {k}; name characters with --chars/--brauer/--sum")
    rows = []
    for key, l in pairs:
        ch = table.character(key)
        m1, mp, mq = pq_table_row(table, k, ch, l)
        cp = ch.value(table.classes_of_order(p)[0])
        cq = ch.value(table.classes_of_order(q)[0])
        rows.append(
            {
                "character": key,
                "label": char_label(ch),
                "xi_p": _cyclo_text(cp),
                "xi_q": _cyclo_text(cq),
                "l": l,
                "m1": m1,
                "mp": mp,
                "mq": mq,
            }
        )
    return {"kind": "pq-table", "table": _table_info(table, path), "result": {"order": k, "p": p, "q": q, "rows": rows}}


def _cyclo_text(x) -> str:
    return str(_num(x.to_rational())) if x.is_rational() else str(x)


def _alpha_report(args, table, path) -> dict[str, Any]:
    k = args.k
    fixed = {}
    for item in _split(args.fix):
        name, _, val = item.partition("=")
        if not val:
            raise UsageError(f"--fix expects class=value, got {item!r}")
        fixed[name] = int(val)
    ls = [int(x) for x in _split(args.l)] or [0]
    ch = table.character(args.char)
    rows = alpha_table(table, k, ch, args.power, fixed, ls, selection=selection_for(args, table, None))
    return {
        "kind": "alpha",
        "table": _table_info(table, path),
        "result": {
            "order": k,
            "character": args.char,
            "power_order": args.power,
            "fixed": fixed,
            "l": ls,
            "rows": [{"power": t.as_dict(), "alpha": list(a)} for t, a in rows],
        },
    }


def _spectrum_report(args, table, path) -> dict[str, Any]:
    rep = spectrum(table, selection_for(args, table, None), direct=args.direct)
    return {
        "kind": "spectrum",
        "table": _table_info(table, path),
        "result": {
            "entries": [
                {"order": e.order, "status": e.status, "via": e.via, "note": e.note} for e in rep.entries
            ],
            "open": rep.open,
            "excluded": rep.excluded,
        },
    }


def _kimmerle_report(args, table, path) -> dict[str, Any]:
    rep = kimmerle(table, selection_for(args, table, None))
    return {
        "kind": "kimmerle",
        "table": _table_info(table, path),
        "result": {
            "vertices": sorted(rep.group_graph.vertices),
            "edges": [list(e) for e in sorted(rep.group_graph.edges)],
            "missing": [
                {"edge": [p, q], "order": p * q, "status": rep.verdicts[(p, q)].status.value,
                 "note": rep.verdicts[(p, q)].note}
                for p, q in rep.missing_edges
            ],
            "verdict": "Confirmed" if rep.confirmed else "Open",
            "unresolved": sorted(p * q for p, q in rep.unresolved),
        },
    }


def _validate_report(args, table, path) -> dict[str, Any]:
    return {
        "kind": "validate",
        "table": _table_info(table, path),
        "result": {
            "classes": len(table.classes),
            "ordinary": len(table.ordinary),
            "brauer": {str(p): len(table.characters(p)) for p in sorted(table.brauer)},
            "order": table.order,
        },
    }


# --- text rendering --------------------------------------------------------


def _fmt_tuple(values: dict[str, int]) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in values.items()) + ")"


def _align(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _render_order(res: dict[str, Any], lines: list[str]) -> None:
    lines.append(f"order {res['order']}: {res['status']}")
    for m, keys in res["selection"].items():
        lines.append(f"  characters at {m}: {', '.join(keys) if keys else '(none)'}")
    lines.append(f"  towers tried: {res['towers_tried']}; surviving tuples: {res['solutions']}")
    if res["note"]:
        lines.append(f"  note: {res['note']}")
    for i, tw in enumerate(res["towers"], 1):
        powers = "; ".join(f"{m}: {_fmt_tuple(t)}" for m, t in tw["tower"].items()) or "none"
        lines.append(f"  tower {i} (powers {powers}): {len(tw['tuples'])} tuples")
        for name, (lo, hi) in tw["bounds"].items():
            lines.append(f"    {lo} <= nu[{name}] <= {hi}")
        for item in tw["tuples"]:
            line = f"    {_fmt_tuple(item['values'])}"
            if "mu" in item:
                mus = " ".join(f"{key}/{l}={v}" for key, l, v in item["mu"])
                line += f"  mu: {mus}"
            lines.append(line)


def render_text(report: dict[str, Any]) -> str:
    """Plain-text rendering; depends only on the report dictionary."""
    kind = report["kind"]
    res = report["result"]
    info = report["table"]
    lines = [f"# {info['group']} ({info['path']}){' [partial]' if info['partial'] else ''}"]
    if kind == "validate":
        br = ", ".join(f"{p}: {n}" for p, n in res["brauer"].items()) or "none"
        lines.append(
            f"valid: order {res['order']}, {res['classes']} classes, "
            f"{res['ordinary']} ordinary characters, Brauer {br}"
        )
    elif kind in ("order", "zassenhaus"):
        _render_order(res, lines)
        if kind == "zassenhaus":
            verdicts = {
                "RationallyTrivial": "every unit of this order is rationally conjugate to a group element",
                "Excluded": "no unit of this order exists",
                "Open": "not decided",
            }
            lines.append(f"zassenhaus: {verdicts[res['status']]}")
    elif kind == "pq-table":
        head = ["|u|", "p", "q", "xi", "xi(Cp)", "xi(Cq)", "l", "m1", "mp", "mq"]
        body = [
            [str(res["order"]), str(res["p"]), str(res["q"]), r["label"], r["xi_p"], r["xi_q"],
             str(r["l"]), str(r["m1"]), str(r["mp"]), str(r["mq"])]
            for r in res["rows"]
        ]
        lines.extend(_align([head] + body))
    elif kind == "alpha":
        fixed = ", ".join(f"{c}={v}" for c, v in res["fixed"].items()) or "nothing"
        lines.append(
            f"order {res['order']}, {res['character']}, constants k*mu_l for l = "
            f"{', '.join(map(str, res['l']))} with {fixed} fixed"
        )
        head = [f"u^d of order {res['power_order']}"] + [f"l={l}" for l in res["l"]]
        body = [[_fmt_tuple(r["power"])] + [str(a) for a in r["alpha"]] for r in res["rows"]]
        lines.extend(_align([head] + body))
    elif kind == "spectrum":
        for e in res["entries"]:
            extra = f" (multiple of {e['via']})" if e["via"] else ""
            note = f" [{e['note']}]" if e["note"] else ""
            lines.append(f"{e['order']:>6}  {e['status']}{extra}{note}")
        lines.append("open: {" + ", ".join(map(str, res["open"])) + "}")
    elif kind == "kimmerle":
        lines.append("primes: " + ", ".join(map(str, res["vertices"])))
        lines.append("edges: " + ", ".join(f"{p}-{q}" for p, q in res["edges"]))
        for m in res["missing"]:
            note = f" [{m['note']}]" if m["note"] else ""
            lines.append(f"  {m['edge'][0]}-{m['edge'][1]} (order {m['order']}): {m['status']}{note}")
        if res["verdict"] == "Confirmed":
            lines.append("verdict: Confirmed")
        else:
            lines.append("verdict: Open {" + ", ".join(map(str, res["unresolved"])) + "}")
    else:
        raise ValueError(f"unknown report kind {kind!r}")
    return "\n".join(lines) + "\n"


# --- exit status -----------------------------------------------------------


def exit_status(report: dict[str, Any], strict: bool) -> int:
    kind, res = report["kind"], report["result"]
    if kind in ("order", "zassenhaus"):
        if res["note"]:
            return EXIT_UNBOUNDED
        if strict and res["status"] == Status.OPEN.value:
            return EXIT_OPEN
    elif kind == "spectrum":
        if any(e["note"] for e in res["entries"]):
            return EXIT_UNBOUNDED
        if strict and res["open"]:
            return EXIT_OPEN
    elif kind == "kimmerle":
        if any(m["note"] for m in res["missing"]):
            return EXIT_UNBOUNDED
        if strict and res["verdict"] != "Confirmed":
            return EXIT_OPEN
    return EXIT_OK


# --- argument parsing ------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("table", help="table file, or a bundled fixture name (A5, He, ON)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true", help="exit 1 when a verdict is Open")


def _add_selection(p: argparse.ArgumentParser, explicit: bool = True) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all-chars", action="store_true", help="every usable character (default)")
    g.add_argument("--profile", action="store_true", help="the selections stored in the table")
    if explicit:
        p.add_argument("--chars", action="append", metavar="IDS", help="ordinary characters, e.g. chi2,chi7")
        p.add_argument("--brauer", action="append", metavar="P:ID", help="Brauer characters, e.g. 2:chi6")
        p.add_argument("--sum", action="append", metavar="I+J@P", help="character sum, e.g. 1+2+3+6+8@2")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the validation code, not 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="helpkit", description="Partial augmentation constraints for torsion units.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="parse and validate a table")
    _add_common(p)

    for name, text in (("order", "solve one order"), ("zassenhaus", "rational conjugacy verdict for one order")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("k", type=int)
        _add_selection(p)
        p.add_argument("--no-mu", action="store_true", help="omit per-tuple mu values")

    p = sub.add_parser("pq-table", help="m1/mp/mq rows for an order pq")
    _add_common(p)
    p.add_argument("k", type=int)
    _add_selection(p)
    p.add_argument("-l", action="append", metavar="L", help="l values (comma separated)")

    p = sub.add_parser("alpha", help="constants of mu_l after fixing variables, per feasible power")
    _add_common(p)
    p.add_argument("k", type=int)
    p.add_argument("--char", required=True, help="character key, e.g. chi2")
    p.add_argument("--power", type=int, required=True, help="order of the varying power u^d")
    p.add_argument("--fix", action="append", metavar="CLASS=V", help="fixed partial augmentations")
    p.add_argument("-l", action="append", metavar="L", help="l values (comma separated)")
    _add_selection(p, explicit=False)

    p = sub.add_parser("spectrum", help="classify every divisor of the exponent")
    _add_common(p)
    _add_selection(p, explicit=False)
    p.add_argument("--direct", choices=("pq", "all"), default="pq",
                   help="attempt only two-prime orders directly (default) or every order")

    p = sub.add_parser("kimmerle", help="prime graph comparison")
    _add_common(p)
    _add_selection(p, explicit=False)
    return parser


_BUILDERS = {
    "validate": _validate_report,
    "order": lambda a, t, p: _order_report(a, t, p, "order"),
    "zassenhaus": lambda a, t, p: _order_report(a, t, p, "zassenhaus"),
    "pq-table": _pq_report,
    "alpha": _alpha_report,
    "spectrum": _spectrum_report,
    "kimmerle": _kimmerle_report,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI; returns (exit code, stdout text, stderr text)."""
    args = build_parser().parse_args(argv)
    try:
        path = resolve_table_path(args.table)
        table = load(path)
        report = _BUILDERS[args.command](args, table, path)
    except TableError as exc:
        return exc.exit_code, "", f"error: {exc}\n"
    except (UsageError, ConstraintError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        return EXIT_INVALID, "", f"error: {msg}\n"
    if args.format == "json":
        out = json.dumps(report, indent=2) + "\n"
    else:
        out = render_text(report)
    return exit_status(report, args.strict), out, ""


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
