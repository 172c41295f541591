"""Command-line front end.

Exit status: 0 on success, 1 when the computation is infeasible at this
scale (budget exceeded, hypotheses violated), 2 on invalid arguments, 3 when
a decode simulation fails inside its guaranteed regime.  Setting
MULTICOVER_FORMAT=json makes JSON the default output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from multicover import bounds, construct, decode, lincode, spherecount
from multicover.ffield import gf
from multicover.mctuple import ShapeError, ShapeProfile

EXIT_OK, EXIT_INFEASIBLE, EXIT_ARGS, EXIT_GUARANTEE = 0, 1, 2, 3


class Infeasible(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _shape(args) -> ShapeProfile:
    m, n = list(args.m), list(args.n)
    l = args.l if args.l is not None else max(len(m), len(n))
    if len(m) == 1:
        m = m * l
    if len(n) == 1:
        n = n * l
    if len(m) != l or len(n) != l:
        raise ShapeError(f"--m and --n need 1 or l = {l} entries")
    return ShapeProfile(tuple(m), tuple(n))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


# -- subcommands ------------------------------------------------------------------------


def cmd_bounds(args) -> tuple[dict, str]:
    shape = _shape(args)
    reports = bounds.all_bounds(shape, args.q, args.d)
    if args.bound != "all":
        reports = {args.bound: reports[args.bound]}
    data = {"q": args.q, "d": args.d, "shape": shape.to_json(),
            "bounds": {k: v.to_json() for k, v in reports.items()}}
    rows = [[k, v.value if v.applicable else "-", v.reason] for k, v in reports.items()]
    return data, _table(rows, ["bound", "value", "note"])


def cmd_spheres(args) -> tuple[dict, str]:
    shape = _shape(args)
    table = spherecount.SphereTable(args.q)
    out = {"q": args.q, "shape": shape.to_json(), "rows": []}
    rows = []
    for r in range(args.rmax + 1):
        entry = {"r": r}
        if args.mode in ("exact", "both"):
            try:
                S = spherecount.sphere_sizes(shape, args.q, r, "exact", table)
                entry["S"], entry["B"] = S[r], sum(S)
            except ValueError:
                if args.mode == "exact":
                    raise Infeasible("too large for exact mode")
        if args.mode in ("bounds", "both"):
            lo, hi = spherecount.sphere_sizes(shape, args.q, r, "bounds")
            entry["S_interval"] = [lo[r], hi[r]]
            entry["B_interval"] = [sum(lo), sum(hi)]
        out["rows"].append(entry)
        rows.append([r, entry.get("S", "-"), entry.get("B", "-"),
                     entry.get("S_interval", "-"), entry.get("B_interval", "-")])
    return out, _table(rows, ["r", "S_r", "B_r", "S_r interval", "B_r interval"])


def cmd_mk_code(args) -> tuple[dict, str]:
    if args.family == "lrs":
        code = construct.lrs_code(construct.LrsParams(args.q, args.s, args.t, args.k))
    elif args.family == "nested":
        code = construct.lrs_nested(args.q, args.s, args.t, args.k, args.u)[0]
    else:
        if args.seed is None:
            raise ValueError("--seed is required for random codes")
        shape = _shape(args)
        code = construct.random_code(shape, gf(args.q), args.k, np.random.default_rng(args.seed))
    data = code.to_json()
    text = _dump(data)
    if args.out:
        Path(args.out).write_text(text + "\n")
        return data, f"wrote {args.out}: dim {code.dim}, shape m={list(code.shape.m)} n={list(code.shape.n)}"
    return data, text


def _load_code(path: str) -> lincode.LinearCode:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from exc
    return lincode.LinearCode.from_json(obj)


def _maybe(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except ValueError as exc:
        if "budget" in str(exc) or "not applicable" in str(exc) or "hypotheses" in str(exc):
            return None
        raise


def analyze_code(code: lincode.LinearCode) -> dict:
    norm = code if not code.shape.unchecked else lincode.normalize(code)[0]
    D = lincode.dual(norm)
    out = {
        "dim": code.dim,
        "shape": code.shape.to_json(),
        "q": code.field.order,
        "distances": {m: _maybe(lincode.min_distance, norm, m) for m in lincode.METRICS},
        "is_mmcd": _maybe(lincode.is_mmcd, norm),
        "is_mds_by_columns": _maybe(lincode.is_mds_by_columns, norm),
        "is_mds_by_rows": _maybe(lincode.is_mds_by_rows, norm),
        "dual_dim": D.dim,
        "dual_d_mc": _maybe(lincode.min_distance, D),
        "dual_is_mmcd": _maybe(lincode.is_mmcd, D),
        "is_dually_mmcd": _maybe(lincode.is_dually_mmcd, norm),
    }
    covers = {}
    ms = set(norm.shape.m)
    if len(ms) == 1 and code.dim % next(iter(ms)) == 0:
        m = next(iter(ms))
        comp_size = norm.shape.N - code.dim // m
        info_size = code.dim // m
        comp = lincode.info_covers(norm, comp_size)
        info = lincode.info_covers(norm, info_size)
        covers = {
            "complementary_size": comp_size,
            "complementary_count": sum(c.is_comp_info for c in comp),
            "complementary_total": len(comp),
            "information_size": info_size,
            "information_count": sum(c.is_info for c in info),
            "information_total": len(info),
        }
    out["covers"] = covers
    return out


def cmd_analyze(args) -> tuple[dict, str]:
    code = _load_code(args.code)
    data = analyze_code(code)
    lines = [f"{'dim':<22}{data['dim']}",
             f"{'q':<22}{data['q']}",
             f"{'shape':<22}m={data['shape']['m']} n={data['shape']['n']}"]
    for k, v in data["distances"].items():
        lines.append(f"d_{k:<20}{v if v is not None else 'n/a'}")
    for key in ("is_mmcd", "is_mds_by_columns", "is_mds_by_rows", "dual_dim", "dual_d_mc",
                "dual_is_mmcd", "is_dually_mmcd"):
        v = data[key]
        lines.append(f"{key:<22}{v if v is not None else 'n/a'}")
    for k, v in data["covers"].items():
        lines.append(f"{k:<22}{v}")
    return data, "\n".join(lines)


def cmd_decode_sim(args) -> tuple[dict, str]:
    code = _load_code(args.code)
    stats = decode.channel_simulate(code, args.t, args.rho, args.trials, args.seed)
    stats.pop("mean_decode_seconds")
    text = _table([[k, v] for k, v in sorted(stats.items())], ["field", "value"])
    return stats, text


def cmd_factor_bound(args) -> tuple[dict, str]:
    lo, hi = args.delta
    out = {"q0": args.q0, "r": args.r, "s": args.s, "u": args.u, "l": args.l,
           "b_offset": args.b_offset, "rows": []}
    rows = []
    for delta in range(lo, hi + 1):
        res = construct.srbch_dimension_bound(args.q0, args.r, args.s, args.u, args.l, delta, args.b_offset)
        out["rows"].append({"delta": delta, "eq7": res["eq7"], "eq8": res["eq8"],
                            "applicable": res["applicable"]})
        rows.append([delta, res["eq7"], res["eq8"], res["eq7"] >= res["eq8"]])
    out["cosets"] = res["cosets"]
    return out, _table(rows, ["delta", "eq7", "eq8", "eq7>=eq8"])


def _delta_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            return int(a), int(b)
        return int(text), int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multicover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def shape_flags(sp, required=True):
        sp.add_argument("--l", type=int, help="number of blocks")
        sp.add_argument("--m", type=_int_list, required=required, help="rows per block, e.g. 3,2")
        sp.add_argument("--n", type=_int_list, required=required, help="columns per block")

    sp = sub.add_parser("bounds", help="bound table for given parameters")
    sp.add_argument("--q", type=int, required=True)
    shape_flags(sp)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bound", default="all",
                    choices=["all", "singleton", "hamming", "plotkin", "elias", "sphere",
                             "projective", "ell", "gv"])
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("spheres", help="sphere and ball sizes")
    sp.add_argument("--q", type=int, required=True)
    shape_flags(sp)
    sp.add_argument("--rmax", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "bounds", "both"], default="exact")
    sp.set_defaults(func=cmd_spheres)

    sp = sub.add_parser("mk-code", help="construct a code and write it as JSON")
    sp.add_argument("--family", choices=["lrs", "nested", "random"], required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--u", type=int, default=1)
    shape_flags(sp, required=False)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_mk_code)

    sp = sub.add_parser("analyze", help="parameters of a code file")
    sp.add_argument("--code", required=True)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("decode-sim", help="Monte-Carlo error and erasure decoding")
    sp.add_argument("--code", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--rho", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_decode_sim)

    sp = sub.add_parser("factor-bound", help="sum-rank BCH dimension bounds")
    sp.add_argument("--q0", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--u", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--delta", type=_delta_range, required=True, help="N or A..B")
    sp.add_argument("--b-offset", type=int, default=1)
    sp.set_defaults(func=cmd_factor_bound)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true",
                        default=os.environ.get("MULTICOVER_FORMAT", "text") == "json",
                        help="emit JSON (default when MULTICOVER_FORMAT=json)")
    return p


def _is_infeasible(msg: str) -> bool:
    return any(key in msg for key in ("budget", "too large", "infeasible", "hypotheses",
                                      "not applicable"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        data, text = args.func(args)
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ShapeError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE if _is_infeasible(str(exc)) else EXIT_ARGS
    print(_dump(data) if args.json else text)
    if args.command == "decode-sim" and data["guaranteed"] and data["successes"] != data["trials"]:
        return EXIT_GUARANTEE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
