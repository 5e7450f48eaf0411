"""Command-line interface: info, cohomology, invariants, cess, table, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import (
    CatalogEntry,
    CatalogError,
    builtin,
    cache_dir,
    load_pcp,
    load_resolution,
    save_resolution,
)
from .invariants import Workspace
from .pgroup import PcPresentation
from .resolution import BudgetExceededError, CohomologyFragment

CSV_HEADER = "order,id,type,e,h,d0,d1,e_prime,e_dprime,p_central,certified"


def default_degree(pres: PcPresentation) -> int:
    return 10 if pres.order <= 32 else 8


def resolve_group(name: str) -> CatalogEntry:
    """A catalog id, or a path to a .pcp file."""
    if name.endswith(".pcp") or os.path.sep in name:
        pres = load_pcp(name)
        return CatalogEntry(os.path.basename(name).rsplit(".", 1)[0], pres)
    return builtin(name)


def _report(entry: CatalogEntry, N: int, ws: Workspace) -> dict:
    rep = ws.analyzer(entry.pres, N, label=entry.id).report(entry.id).to_json_dict()
    entry.check_invariants(rep)
    return rep


def cmd_info(args, out) -> int:
    entry = resolve_group(args.group)
    fp = entry.fingerprint()
    info = {"group_id": entry.id, "p": entry.pres.p, **fp, "notes": entry.notes}
    json.dump(info, out, indent=2)
    out.write("\n")
    return 0


def cmd_cohomology(args, out) -> int:
    entry = resolve_group(args.group)
    N = args.degree if args.degree is not None else default_degree(entry.pres)
    ws = Workspace(budget=args.budget)
    directory = args.cache or cache_dir()
    if directory:
        cached = load_resolution(entry.pres, directory, budget=args.budget)
        if cached is not None:
            ws._res[entry.pres.hash_key()] = cached  # extended below if short
    res = ws.resolution(entry.pres, N)
    if directory:
        save_resolution(res, directory)
    frag = CohomologyFragment(res)
    json.dump({
        "group_id": entry.id,
        "degree_bound": N,
        "betti": res.betti[: N + 1],
        "ring_generators_by_degree": frag.generator_counts(N),
    }, out, indent=2)
    out.write("\n")
    return 0


def cmd_invariants(args, out) -> int:
    entry = resolve_group(args.group)
    N = args.degree if args.degree is not None else default_degree(entry.pres)
    ws = Workspace(budget=args.budget)
    rep = _report(entry, N, ws)
    text = json.dumps(rep, indent=2)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    out.write(text + "\n")
    return 0


def cmd_cess(args, out) -> int:
    entry = resolve_group(args.group)
    N = args.degree if args.degree is not None else default_degree(entry.pres)
    ws = Workspace(budget=args.budget)
    a = ws.analyzer(entry.pres, N, label=entry.id)
    ep, epc = a.e_prime()
    edp, edpc = a.e_double_prime()
    json.dump({
        "group_id": entry.id,
        "degree_bound": N,
        "p_central": a.p_central,
        "cess_dims": list(a.cess_dims().dims),
        "qa_cess_dims": list(a.qa_cess_dims().dims),
        "pc_cess_dims": list(a.pc_cess_dims().dims),
        "e_prime": ep,
        "e_double_prime": edp,
        "certified": {"e_prime": epc, "e_double_prime": edpc},
    }, out, indent=2)
    out.write("\n")
    return 0


def _csv_row(rep: dict) -> str:
    type_str = "[" + ",".join(str(a) for a in rep["type"]) + "]" if rep["type"] is not None else ""
    certified = all(rep["certified"].values()) if rep["certified"] else False

    def fmt(v):
        return "" if v is None else str(v)

    return ",".join([
        str(rep["order"]), rep["group_id"], type_str, fmt(rep["e"]), fmt(rep["h"]),
        fmt(rep["d0"]), fmt(rep["d1"]), fmt(rep["e_prime"]),
        fmt(rep["e_double_prime"]), str(rep["p_central"]).lower(),
        str(certified).lower(),
    ])


def _table_worker(name: str, degree: int | None, budget: int) -> dict:
    entry = resolve_group(name)
    N = degree if degree is not None else default_degree(entry.pres)
    return _report(entry, N, Workspace(budget=budget))


def cmd_table(args, out) -> int:
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(
                _table_worker, args.groups,
                [args.degree] * len(args.groups),
                [args.budget] * len(args.groups),
            ))
    else:
        ws = Workspace(budget=args.budget)
        rows = []
        for gid in args.groups:
            entry = resolve_group(gid)
            N = args.degree if args.degree is not None else default_degree(entry.pres)
            rows.append(_report(entry, N, ws))
    lines = [CSV_HEADER] + [_csv_row(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(text)
    return 0


# ---------------------------------------------------------------------------
# the verification suites


def _check(name, cond, lines):
    lines.append(f"{'PASS' if cond else 'FAIL'}  {name}")
    return bool(cond)


def run_verify(suite: str = "quick", out=None, pcp_64_108: str | None = None,
               budget: int = 20000) -> int:
    """Run the acceptance criteria; one PASS/FAIL line each, 0 iff all pass."""
    from . import acceptance

    out = out or sys.stdout
    lines: list[str] = []
    ok = acceptance.run_criteria(suite, lines, pcp_64_108=pcp_64_108, budget=budget)
    for line in lines:
        out.write(line + "\n")
    out.write(("ALL PASS" if ok else "FAILURES") + f" [{suite}]\n")
    return 0 if ok else 1


def cmd_verify(args, out) -> int:
    return run_verify(args.suite, out, pcp_64_108=args.pcp_64_108, budget=args.budget)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="centdet",
        description="Mod-p cohomology of finite p-groups and central detection invariants",
    )
    ap.add_argument("--budget", type=int, default=20000,
                    help="column cap for resolution differentials")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="fingerprint of a catalog entry or .pcp file")
    p.add_argument("group")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("cohomology", help="Betti numbers and ring generator counts")
    p.add_argument("group")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--cache", default=None, help="resolution cache directory")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("invariants", help="full invariant report as JSON")
    p.add_argument("group")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--json", default=None, help="also write the report here")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("cess", help="central essential cohomology data")
    p.add_argument("group")
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(func=cmd_cess)

    p = sub.add_parser("table", help="CSV table of invariants for several groups")
    p.add_argument("groups", nargs="+")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--csv", default=None, help="also write the CSV here")
    p.add_argument("--jobs", type=int, default=1,
                   help="process pool size for independent groups")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=["quick", "full", "stretch"], default="quick")
    p.add_argument("--pcp-64-108", default=None,
                   help="user-supplied presentation for the conditional checks")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (CatalogError, BudgetExceededError, ValueError, OSError) as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stdout)
        sys.stdout.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
