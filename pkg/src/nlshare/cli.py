"""Command-line front end: ``nlshare <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .capacity import (
    MAX_OBSERVERS,
    capacity,
    conservative_capacity_bound,
    critical_bisection,
    critical_sequence,
    ratio,
    required_parties,
)
from .network import ScenarioConfig, classical_bound_enumerate, normalize_mode, optimal_setup, quantum_optimum
from .optimizer import optimize_angles
from .sequential import UnsharpnessSchedule, degradation_predict, simulate_sequence

COMMANDS = ("optimum", "classical-bound", "simulate", "critical", "capacity", "capacity-table", "bound", "verify")
N_TABLE_MAX = 16

DEFAULTS: dict[str, Any] = {
    "m": 3,
    "n": 2,
    "n_max": None,
    "mode": "asymmetric",
    "lambdas": None,
    "k": None,
    "restarts": None,
    "seed": 0,
    "output": None,
    "out": None,
    "only": None,
    "perturb": False,
}


class UsageError(Exception):
    pass


def fmt(x: float) -> float:
    """Round to 10 significant digits so printed output is byte-stable."""
    return float(f"{x:.10g}")


def _clean(obj):
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r] + [""] * (len(header) - len(r)))
    return buf.getvalue()


def _parse_lambdas(v) -> list[float] | None:
    if v is None:
        return None
    if isinstance(v, str):
        try:
            vals = [float(x) for x in v.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"could not parse --lambdas {v!r}") from None
    else:
        vals = [float(x) for x in v]
    bad = [x for x in vals if not 0.0 <= x <= 1.0]
    if bad:
        raise UsageError(f"unsharpness values must lie in [0, 1]: {bad}")
    if not vals:
        raise UsageError("--lambdas needs at least one value")
    return vals


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults < config file < command-line flags."""
    cfg: dict[str, Any] = dict(DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(data) - set(DEFAULTS) - {"command"}
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        if data.get("command") not in (None, args.command):
            raise UsageError(f"config is for {data['command']!r}, not {args.command!r}")
        cfg.update({k: v for k, v in data.items() if k != "command"})
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            cfg[key] = v
    if cfg["m"] is None or int(cfg["m"]) < 2:
        raise UsageError(f"--m must be >= 2, got {cfg['m']}")
    if cfg["n"] is None or int(cfg["n"]) < 2:
        raise UsageError(f"--n must be >= 2, got {cfg['n']}")
    cfg["m"], cfg["n"] = int(cfg["m"]), int(cfg["n"])
    try:
        cfg["mode"] = normalize_mode(cfg["mode"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg["lambdas"] = _parse_lambdas(cfg["lambdas"])
    if cfg["output"] not in (None, "json", "csv"):
        raise UsageError("--output must be json or csv")
    if cfg["k"] is not None and int(cfg["k"]) < 1:
        raise UsageError("--k must be >= 1")
    if cfg["restarts"] is not None and int(cfg["restarts"]) < 1:
        raise UsageError("--restarts must be >= 1")
    return cfg


def cmd_optimum(cfg) -> tuple[dict, tuple[list[str], list[list]]]:
    m = cfg["m"]
    classical = 2 * m - 2
    quantum = quantum_optimum(m)
    res = {
        "classical": float(classical),
        "quantum": quantum,
        "ratio": ratio(m),
        "margin": quantum - classical,
        "violated": quantum > classical,
    }
    # the numerical search is opt-in: it runs only when a restart count is given
    if cfg["restarts"] is not None:
        best_cfg, best = optimize_angles(ScenarioConfig(cfg["n"], m), cfg["restarts"], cfg["seed"])
        res["numerical_best"] = best
        res["numerical_alice_angles"] = list(best_cfg.alice_angles)
        res["numerical_bob_angles"] = list(best_cfg.bob_angles)
    keys = list(res)
    return res, (keys, [[res[k] for k in keys]])


def cmd_classical_bound(cfg):
    best, witness = classical_bound_enumerate(cfg["n"], cfg["m"], with_witness=True)
    res = {"enumerated": best, "expected": float(2 * cfg["m"] - 2), "witness_signs": witness}
    return res, (["enumerated", "expected"], [[best, float(2 * cfg["m"] - 2)]])


def cmd_simulate(cfg):
    if cfg["lambdas"] is None:
        raise UsageError("simulate needs --lambdas")
    config = ScenarioConfig(cfg["n"], cfg["m"], cfg["mode"])
    sched = UnsharpnessSchedule(config.mode, tuple(cfg["lambdas"]))
    _, alice, bob = optimal_setup(config)
    reps = simulate_sequence(config, sched, alice, bob)
    records = []
    for k, rep in enumerate(reps, start=1):
        closed = degradation_predict(config, sched, k)
        records.append(
            {
                "k": k,
                "lambda": sched.lambdas[k - 1],
                "beta_sim": rep.beta,
                "beta_closed_form": closed,
                "delta": abs(rep.beta - closed),
                "violated": rep.violated,
            }
        )
    res = {
        "bound": config.classical_bound,
        "observers": records,
        "max_delta": max(r["delta"] for r in records),
    }
    header = list(records[0])
    return res, (header, [[r[h] for h in header] for r in records])


def cmd_critical(cfg):
    seq = critical_sequence(cfg["m"], cfg["n"], cfg["mode"], MAX_OBSERVERS)
    n_check = min(seq.k_max, cfg["k"] if cfg["k"] is not None else 5)
    bisect = []
    for k in range(1, n_check + 1):
        b = critical_bisection(cfg["m"], cfg["n"], cfg["mode"], k, seq.critical_lambdas[: k - 1])
        bisect.append(b)
    delta = max((abs(a - b) for a, b in zip(seq.critical_lambdas, bisect)), default=0.0)
    res = {
        "critical_lambdas": list(seq.critical_lambdas),
        "k_max": seq.k_max,
        "first_infeasible_lambda": seq.first_infeasible_lambda,
        "bisection": bisect,
        "max_bisection_delta": delta,
    }
    rows = [[k, lam, bisect[k - 1] if k <= len(bisect) else None] for k, lam in enumerate(seq.critical_lambdas, 1)]
    rows.append([seq.k_max + 1, seq.first_infeasible_lambda, None])
    return res, (["k", "lambda", "lambda_bisection"], rows)


def cmd_capacity(cfg):
    k = capacity(cfg["m"], cfg["n"], cfg["mode"])
    res = {"k_max": k}
    return res, (["m", "n", "mode", "k_max"], [[cfg["m"], cfg["n"], cfg["mode"], k]])


def cmd_capacity_table(cfg):
    lo = cfg["n"]
    hi = int(cfg["n_max"]) if cfg["n_max"] is not None else lo
    if not 2 <= lo <= hi <= N_TABLE_MAX:
        raise UsageError(f"n range must lie within 2..{N_TABLE_MAX}, got {lo}..{hi}")
    rows, table = [], []
    for n in range(lo, hi + 1):
        seq = critical_sequence(cfg["m"], n, cfg["mode"], MAX_OBSERVERS)
        rows.append([n, seq.k_max, *seq.critical_lambdas])
        table.append({"n": n, "k_max": seq.k_max, "critical_lambdas": list(seq.critical_lambdas)})
    width = max(len(r) for r in rows) - 2
    header = ["n", "k_max"] + [f"lambda_{i}" for i in range(1, width + 1)]
    return {"rows": table}, (header, rows)


def cmd_bound(cfg):
    m, n = cfg["m"], cfg["n"]
    res = {
        "conservative_capacity_bound": conservative_capacity_bound(m, n),
        "exact_capacity": capacity(m, n, "asymmetric"),
    }
    if cfg["k"] is not None:
        res["k"] = int(cfg["k"])
        res["required_parties"] = required_parties(m, int(cfg["k"]))
    keys = list(res)
    return res, (keys, [[res[k] for k in keys]])


HANDLERS = {
    "optimum": cmd_optimum,
    "classical-bound": cmd_classical_bound,
    "simulate": cmd_simulate,
    "critical": cmd_critical,
    "capacity": cmd_capacity,
    "capacity-table": cmd_capacity_table,
    "bound": cmd_bound,
}

PARAM_KEYS = {
    "optimum": ["m", "n", "restarts", "seed"],
    "classical-bound": ["m", "n"],
    "simulate": ["m", "n", "mode", "lambdas"],
    "critical": ["m", "n", "mode", "k"],
    "capacity": ["m", "n", "mode"],
    "capacity-table": ["m", "n", "n_max", "mode"],
    "bound": ["m", "n", "k"],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlshare", description=__doc__)
    p.add_argument("--version", action="version", version=f"nlshare {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON file with default options")
        s.add_argument("--m", type=int)
        s.add_argument("--n", type=int)
        s.add_argument("--n-max", dest="n_max", type=int)
        s.add_argument("--mode", choices=["sym", "asym", "symmetric", "asymmetric"])
        s.add_argument("--lambdas", help="comma-separated unsharpness values")
        s.add_argument("--k", type=int)
        s.add_argument("--restarts", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--output", choices=["json", "csv"])
        s.add_argument("--out", help="write to this path instead of stdout")
        if name == "verify":
            s.add_argument("--only", action="append", help="run only this check (repeatable)")
            s.add_argument("--perturb", action="store_true", help="negative control: detune B_1")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run_verify(cfg) -> int:
    from .checks import run_checks

    try:
        results = run_checks(cfg["only"], perturb=cfg["perturb"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.passed for r in results)
    if cfg["output"] == "json":
        payload = {
            "command": "verify",
            "parameters": {"only": cfg["only"], "perturb": cfg["perturb"]},
            "results": [r.__dict__ for r in results],
            "tool_version": __version__,
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg["output"] == "csv":
        text = to_csv(["criterion", "name", "passed", "detail"], [[r.criterion, r.name, r.passed, r.detail] for r in results])
    else:
        text = "".join(r.line() + "\n" for r in results)
        text += f"{sum(r.passed for r in results)}/{len(results)} checks passed\n"
    _emit(text, cfg["out"])
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "verify":
            return run_verify(cfg)
        results, (header, rows) = HANDLERS[args.command](cfg)
        fmt_out = cfg["output"] or ("csv" if args.command == "capacity-table" else "json")
        if fmt_out == "csv":
            text = to_csv(header, rows)
        else:
            payload = {
                "command": args.command,
                "parameters": {k: cfg[k] for k in PARAM_KEYS[args.command]},
                "results": results,
                "tool_version": __version__,
            }
            text = json.dumps(_clean(payload), indent=2) + "\n"
        _emit(text, cfg["out"])
        return 0
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))  # exits with status 2
    except RuntimeError as exc:
        print(f"nlshare: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
