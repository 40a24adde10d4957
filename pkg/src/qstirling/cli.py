"""Command line front end.

    python -m qstirling table stirling-b --n 4 --format csv
    python -m qstirling verify all --max-n 4 --r 1,2,3 --order 6
    python -m qstirling stats b --n 2 --stats des,fmaj

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
errors (unknown identity, bad parameters, caps exceeded).
"""
from __future__ import annotations

import argparse
import io
import json
import sys

from . import groups, identities, starred, stirling
from .errors import QStirlingError
from .groups import Caps

TABLE_FAMILIES = (
    "stirling-a",
    "stirling-b",
    "chow-gessel",
    "stirling-r",
    "stirling-d",
    "eulerian-a",
    "eulerian-b",
    "eulerian-r",
    "bfmaj",
)

STATS = {
    "a": ("des", "maj"),
    "b": ("des", "fmaj", "neg"),
    "colored": ("des_r", "fmaj_r"),
}


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("r values must be positive")
    return values


def _caps(args) -> Caps:
    base = identities.VERIFY_CAPS
    return Caps(
        sn=args.sn_cap if args.sn_cap is not None else base.sn,
        bn=args.bn_cap if args.bn_cap is not None else base.bn,
        colored=args.colored_cap if args.colored_cap is not None else base.colored,
    )


# -- table -------------------------------------------------------------------


def table_rows(family: str, n_max: int, r: int | None = None, caps: Caps | None = None):
    """``(n, k, poly)`` rows of one family for ``n = start .. n_max``."""
    if family not in TABLE_FAMILIES:
        raise UsageError(f"unknown family {family!r}")
    if family.endswith("-r") and r is None:
        raise UsageError(f"{family} needs --r")
    if n_max < 0:
        raise UsageError("--n must be nonnegative")
    rows = []
    if family.startswith("eulerian"):
        for n in range(1, n_max + 1):
            if family == "eulerian-a":
                row = groups.eulerian_a(n, caps)
            elif family == "eulerian-b":
                row = groups.eulerian_b(n, caps)
            else:
                row = groups.eulerian_r(r, n, caps)
            rows.extend((n, k, p) for k, p in enumerate(row))
        return rows
    for n in range(n_max + 1):
        for k in range(n + 1):
            if family == "stirling-a":
                p = stirling.stirling_a(n, k)
            elif family == "stirling-b":
                p = stirling.stirling_b(n, k)
            elif family == "chow-gessel":
                p = stirling.chow_gessel(n, k)
            elif family == "stirling-r":
                p = stirling.stirling_r(r, n, k)
            elif family == "stirling-d":
                p = stirling.stirling_d(n, k)
            else:
                p = starred.bfmaj_enum(n, k, caps)
            rows.append((n, k, p))
    return rows


def render_table(rows, fmt: str) -> str:
    out = io.StringIO()
    if fmt == "csv":
        out.write("n,k,poly\n")
        for n, k, p in rows:
            out.write(f"{n},{k},{p}\n")
    elif fmt == "json":
        out.write(json.dumps([{"n": n, "k": k, "poly": str(p)} for n, k, p in rows], indent=1))
        out.write("\n")
    else:
        for n, k, p in rows:
            out.write(f"{n:>3} {k:>3}  {p}\n")
    return out.getvalue()


# -- verify ------------------------------------------------------------------


def _witness_text(w) -> str:
    if not w:
        return ""
    return ";".join(f"{k}={v}" for k, v in w.items())


def render_reports(reports, fmt: str) -> str:
    out = io.StringIO()
    if fmt == "csv":
        out.write("id,params,equal,lhs,rhs,witness\n")
        for r in reports:
            eq = "true" if r.equal else "false"
            out.write(f"{r.id},{r.params_text()},{eq},{r.lhs},{r.rhs},{_witness_text(r.witness)}\n")
    elif fmt == "json":
        out.write(json.dumps([r.to_dict() for r in reports], indent=1))
        out.write("\n")
    else:
        failed = 0
        for r in reports:
            tag = "PASS" if r.equal else "FAIL"
            out.write(f"{tag} {r.id} {r.params_text()}\n")
            if not r.equal:
                failed += 1
                out.write(f"     witness {_witness_text(r.witness)}\n")
                out.write(f"     lhs {r.lhs}\n")
                out.write(f"     rhs {r.rhs}\n")
        out.write(f"{len(reports)} checks, {failed} failed\n")
    return out.getvalue()


def _selected_ids(args) -> list[str] | None:
    ids = list(args.ids or [])
    if args.ids_flag:
        ids += [x for x in args.ids_flag.split(",") if x]
    if not ids or ids == ["all"]:
        return None
    if "all" in ids:
        raise UsageError("'all' cannot be combined with other ids")
    for i in ids:
        if i not in identities.REGISTRY:
            raise UsageError(f"unknown identity {i!r}")
    return ids


# -- stats -------------------------------------------------------------------


def stat_records(group: str, n: int, r: int | None, names, caps: Caps | None = None):
    if group not in STATS:
        raise UsageError(f"unknown group {group!r}")
    names = tuple(names) if names else STATS[group]
    bad = [s for s in names if s not in STATS[group]]
    if bad:
        raise UsageError(f"statistics {bad} are not defined for group {group}")
    if group == "colored" and r is None:
        raise UsageError("colored needs --r")
    records = []
    if group == "a":
        for perm in groups.enumerate_sn(n, caps):
            des, maj = groups.stats_a(perm)
            sep = "" if n <= 9 else " "
            values = {"des": des, "maj": maj}
            records.append((sep.join(map(str, perm)), [values[s] for s in names]))
    elif group == "b":
        for pi in groups.enumerate_bn(n, caps):
            des, fm, ng, _ = groups.stats_b(pi)
            values = {"des": des, "fmaj": fm, "neg": ng}
            records.append((str(pi), [values[s] for s in names]))
    else:
        for pi in groups.enumerate_colored(r, n, caps):
            des, fm = groups.stats_r(pi)
            values = {"des_r": des, "fmaj_r": fm}
            records.append((str(pi), [values[s] for s in names]))
    return names, records


def render_stats(names, records, fmt: str) -> str:
    out = io.StringIO()
    if fmt == "csv":
        out.write(",".join(("element",) + tuple(names)) + "\n")
        for elem, values in records:
            out.write(",".join([elem] + [str(v) for v in values]) + "\n")
    elif fmt == "json":
        rows = [dict([("element", elem)] + list(zip(names, values))) for elem, values in records]
        out.write(json.dumps(rows, indent=1))
        out.write("\n")
    else:
        for elem, values in records:
            out.write(elem + "  " + " ".join(f"{s}={v}" for s, v in zip(names, values)) + "\n")
    return out.getvalue()


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qstirling", description="q-Stirling numbers, q-Eulerian polynomials and identity checks")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--sn-cap", type=int, default=None, help="largest n for S_n enumeration (default 10)")
        p.add_argument("--bn-cap", type=int, default=None, help="largest n for B_n enumeration (default 8)")
        p.add_argument("--colored-cap", type=int, default=None,
                       help="largest colored group order r^n n! (default 10321920)")

    t = sub.add_parser("table", help="print a table of polynomials")
    t.add_argument("family", choices=TABLE_FAMILIES)
    t.add_argument("--n", "--max-n", dest="n", type=int, required=True, help="last row")
    t.add_argument("--r", type=int, default=None)
    common(t)

    v = sub.add_parser("verify", help="check registered identities")
    v.add_argument("ids", nargs="*", help="identity ids, or 'all'")
    v.add_argument("--ids", dest="ids_flag", default=None, help="comma separated identity ids")
    v.add_argument("--n", "--max-n", dest="max_n", type=int, default=None,
                   help="upper bound on n for every grid (never raises a default grid)")
    v.add_argument("--r", type=_int_list, default=None, help="comma separated colors, e.g. 1,2,3")
    v.add_argument("--order", type=int, default=None, help="series truncation order (default 8)")
    v.add_argument("--include-controls", action="store_true", help="also run the negative controls")
    v.add_argument("--list", action="store_true", help="list identity ids and exit")
    common(v)

    s = sub.add_parser("stats", help="statistics of every group element")
    s.add_argument("group", choices=tuple(STATS))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--stats", default=None, help="comma separated statistic names")
    common(s)
    return ap


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    caps = _caps(args)
    try:
        if args.command == "table":
            text = render_table(table_rows(args.family, args.n, args.r, caps), args.format)
            code = 0
        elif args.command == "verify":
            if args.list:
                stdout.write("".join(i + "\n" for i in identities.registry_ids(True)))
                return 0
            if args.order is not None and args.order < 1:
                raise UsageError("--order must be positive")
            reports = identities.verify_all(
                max_n=args.max_n,
                r_set=args.r,
                order=args.order,
                ids=_selected_ids(args),
                include_controls=args.include_controls,
                caps=caps,
            )
            text = render_reports(reports, args.format)
            code = 0 if all(r.equal for r in reports) else 1
        else:
            names = [x for x in args.stats.split(",") if x] if args.stats else None
            names, records = stat_records(args.group, args.n, args.r, names, caps)
            text = render_stats(names, records, args.format)
            code = 0
    except (UsageError, QStirlingError) as exc:
        sys.stderr.write(f"qstirling: error: {exc}\n")
        return 2
    stdout.write(text)
    return code


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
