"""Command-line interface.

Subcommands:
  norms   compute one norm of one grid function (from a CSV file or a
          generator spec string)
  verify  run inequality suites and write a CSV/JSON report; exit code 0
          iff no check failed
  oracle  DP-vs-exhaustive cross check at small sizes
  scan    convergence table of rearrangement functionals for an analytic
          exemplar across resolutions, plus optional (t, f*, f**, f**-f*)
          profile output

An optional config file (flat key = value lines, comma-separated lists)
provides defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from garopack import harness
from garopack.generators import GeneratorSpec, generate
from garopack.grid import read_grid_csv
from garopack.harness import Config, emit_report, run_suite
from garopack.oscillation import bmo_norm_classic, bmo_norm_star
from garopack.packing import garo_norm, jn_norm
from garopack.rearrange import (
    eval_avg,
    eval_star,
    rearrangement,
    weak_lorentz_norm,
    weak_oscillation_norm,
)


def _parse_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"config line {raw!r} is not key = value")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip().strip('"')
    return out


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="garopack")
    sub = ap.add_subparsers(dest="command", required=True)

    p_norms = sub.add_parser("norms", help="compute a single norm")
    src = p_norms.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="grid function CSV file")
    src.add_argument("--gen", help="generator spec, e.g. kind=power,alpha=0.5,N=256")
    p_norms.add_argument("--p", default="2", help="exponent p (or 'inf' for garo)")
    p_norms.add_argument("--kind", required=True,
                         choices=["jn", "garo", "bmo", "weak"])
    p_norms.add_argument("--family", default="all_grid",
                         choices=["all_grid", "dyadic", "exhaustive"])
    p_norms.add_argument("--out", default="json", choices=["json", "csv"])

    p_verify = sub.add_parser("verify", help="run inequality suites")
    p_verify.add_argument("--suite", default="all",
                          choices=["embeddings", "poincare", "rearrangement",
                                   "oracle", "all"])
    p_verify.add_argument("--n", type=int, choices=[1, 2])
    p_verify.add_argument("--resolutions", help="comma list, e.g. 64,256")
    p_verify.add_argument("--seeds", type=int)
    p_verify.add_argument("--seed0", type=int)
    p_verify.add_argument("--out", help="report path (.json for JSON, else CSV)")
    p_verify.add_argument("--config", help="key = value config file")

    p_oracle = sub.add_parser("oracle", help="DP vs exhaustive cross check")
    p_oracle.add_argument("--max-cells", type=int, default=10)
    p_oracle.add_argument("--seeds", type=int, default=25)
    p_oracle.add_argument("--seed0", type=int)
    p_oracle.add_argument("--out")

    p_scan = sub.add_parser("scan", help="convergence table for an exemplar")
    p_scan.add_argument("--gen", required=True)
    p_scan.add_argument("--resolutions", required=True)
    p_scan.add_argument("--p", default="2")
    p_scan.add_argument("--out")
    p_scan.add_argument("--profile", help="write (t,f*,f**,f**-f*) CSV at finest N")
    return ap


def _parse_p(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _cmd_norms(args) -> int:
    if args.input:
        f = read_grid_csv(args.input)
    else:
        f, _ = generate(GeneratorSpec.from_string(args.gen))
    p = _parse_p(args.p)
    if args.kind == "jn":
        res = jn_norm(f, p, args.family)
        payload = res.to_json_dict()
    elif args.kind == "garo":
        res = garo_norm(f, p, args.family)
        payload = res.to_json_dict()
    elif args.kind == "bmo":
        fam = args.family if args.family != "exhaustive" else "all_grid"
        payload = {"kind": "bmo", "p": "inf", "family": fam,
                   "value": bmo_norm_classic(f, fam),
                   "value_star": bmo_norm_star(f, fam)}
    else:
        r = rearrangement(f)
        payload = {"kind": "weak", "p": "inf" if math.isinf(p) else p,
                   "family": "", "value": weak_lorentz_norm(r, p),
                   "value_oscillation": weak_oscillation_norm(r, p)}
    if args.out == "json":
        import json

        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        keys = sorted(payload)
        print(",".join(keys))
        print(",".join(str(payload[k]) for k in keys))
    return 0


def _config_from(args, defaults: dict[str, str]) -> Config:
    """Merge the config-file defaults and the parsed flags (flags win)."""
    from dataclasses import replace

    updates: dict = {}
    converters = {
        "seeds": int, "seed0": int, "oracle_seeds": int, "oracle_max_cells": int,
        "family_1d": str, "family_2d": str,
        "resolutions_1d": _int_list, "resolutions_2d": _int_list,
    }
    for key, conv in converters.items():
        if key in defaults:
            updates[key] = conv(defaults[key])
    if "n" in defaults:
        updates["n_values"] = (int(defaults["n"]),)
    if "resolutions" in defaults:
        updates["resolutions_1d"] = _int_list(defaults["resolutions"])

    if getattr(args, "seeds", None) is not None:
        updates["seeds"] = args.seeds
    if getattr(args, "seed0", None) is not None:
        updates["seed0"] = args.seed0
    if getattr(args, "n", None):
        updates["n_values"] = (args.n,)
    if getattr(args, "resolutions", None):
        values = _int_list(args.resolutions)
        updates["resolutions_1d"] = values
        updates["resolutions_2d"] = tuple(v for v in values if v <= 64) or values
    return replace(Config(), **updates)


def _emit(records, out_path: str | None) -> None:
    fmt = "json" if (out_path or "").endswith(".json") else "csv"
    data = emit_report(records, fmt)
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


def _summarize(records) -> int:
    by_status: dict[str, int] = {}
    for r in records:
        by_status[r.status] = by_status.get(r.status, 0) + 1
    failed = [r for r in records if r.status == "fail"]
    for r in failed:
        print(f"FAIL {r.check_id} kind={r.kind} n={r.n} N={r.N} p={r.p} "
              f"lhs={r.lhs:.6g} rhs={r.rhs:.6g}", file=sys.stderr)
    print(
        "checks: "
        + " ".join(f"{k}={by_status[k]}" for k in sorted(by_status))
        + f" total={len(records)}",
        file=sys.stderr,
    )
    return 1 if failed else 0


def _cmd_verify(args) -> int:
    defaults = _parse_config_file(args.config) if args.config else {}
    config = _config_from(args, defaults)
    records = run_suite(args.suite, config)
    _emit(records, args.out)
    return _summarize(records)


def _cmd_oracle(args) -> int:
    from dataclasses import replace

    config = replace(Config(), oracle_max_cells=args.max_cells,
                     oracle_seeds=args.seeds,
                     **({"seed0": args.seed0} if args.seed0 else {}))
    records = run_suite("oracle", config)
    _emit(records, args.out)
    return _summarize(records)


def _cmd_scan(args) -> int:
    spec0 = GeneratorSpec.from_string(args.gen)
    p = _parse_p(args.p)
    resolutions = _int_list(args.resolutions)
    lines = ["kind,n,N,p,weak_lorentz,weak_oscillation,l1_norm,max_value"]
    finest = None
    for N in resolutions:
        from dataclasses import replace

        spec = replace(spec0, N=N)
        f, _ = generate(spec)
        r = rearrangement(f)
        lines.append(",".join([
            spec.kind, str(spec.n), str(N), harness._fmt_p(p),
            repr(weak_lorentz_norm(r, p)), repr(weak_oscillation_norm(r, p)),
            repr(r.total_integral), repr(float(r.values[0])),
        ]))
        finest = r
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.profile and finest is not None:
        rows = ["t,f_star,f_avg,gap"]
        ts = np.unique(np.concatenate([
            finest.breakpoints[1:],
            np.geomspace(finest.breakpoints[1], finest.total_measure, 200),
        ]))
        for t in ts:
            fs = eval_star(finest, t)
            fa = eval_avg(finest, t)
            rows.append(f"{t!r},{fs!r},{fa!r},{fa - fs!r}")
        with open(args.profile, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "norms": _cmd_norms,
        "verify": _cmd_verify,
        "oracle": _cmd_oracle,
        "scan": _cmd_scan,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
