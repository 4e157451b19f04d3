"""Command-line front end.

Subcommands: ``check`` (run all four criteria), ``construct`` (emit the
effective channel), ``classical`` (effective table / interventions),
``list`` (built-in scenarios), ``gen`` (random scenario to file).

Exit codes: 0 compatible or success, 1 incompatible or no effective map,
2 undecided, 64 unreadable input, 65 input that parses but violates a
physical invariant, 70 internal criteria disagreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .classical import emergent_channel, observational_vs_do, verify_total_probability
from .compat import CheckConfig, Scenario, construct_emergent, run_all
from .errors import CoarsekitError, MethodDisagreement, ZeroMarginal
from .io import (
    ParseError,
    chain_model_from_json,
    channel_to_json,
    do_model_from_json,
    dumps,
    real_matrix_to_json,
    report_to_json,
    scenario_from_json,
    scenario_to_json,
)
from .scenarios import random_scenario, registry

EXIT_COMPATIBLE = 0
EXIT_INCOMPATIBLE = 1
EXIT_UNDECIDED = 2
EXIT_PARSE = 64
EXIT_INVARIANT = 65
EXIT_DISAGREEMENT = 70

_VERDICT_CODE = {
    "compatible": EXIT_COMPATIBLE,
    "incompatible": EXIT_INCOMPATIBLE,
    "undecided": EXIT_UNDECIDED,
}


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _resolve_input(name_or_path: str) -> tuple[Scenario, str, Optional[dict]]:
    """Registry name or scenario file -> (scenario, label, raw document)."""
    reg = registry()
    if name_or_path in reg:
        return reg[name_or_path].scenario, name_or_path, None
    doc = _load_json(name_or_path)
    return scenario_from_json(doc), name_or_path, doc


def _default_seed() -> int:
    env = os.environ.get("COARSEKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ParseError(f"COARSEKIT_SEED must be an integer, got {env!r}") from exc


def _build_config(args, doc: Optional[dict]) -> CheckConfig:
    """Defaults, overridden by the file's config block, then by flags."""
    file_cfg = (doc or {}).get("config", {})
    defaults = CheckConfig()

    def pick(flag_value, file_key, default):
        if flag_value is not None:
            return flag_value
        if file_key in file_cfg:
            return file_cfg[file_key]
        return default

    tol = pick(args.tol, "tol", None)
    seed = args.seed if args.seed is not None else file_cfg.get("seed", _default_seed())
    ancilla = pick(getattr(args, "ancilla", None), "ancilla", None)
    return CheckConfig(
        fiber_tol=tol if tol is not None else defaults.fiber_tol,
        algebraic_rel_tol=tol if tol is not None else defaults.algebraic_rel_tol,
        sdp_tol=tol if tol is not None else defaults.sdp_tol,
        equality_tol=tol if tol is not None else defaults.equality_tol,
        sdp_max_iter=int(pick(args.max_iter, "max_iter", defaults.sdp_max_iter)),
        witness_trials=int(pick(args.trials, "trials", defaults.witness_trials)),
        ancilla_dims=None if ancilla is None else (int(ancilla),),
        seed=int(seed),
    )


def _config_echo(cfg: CheckConfig, s: Scenario) -> dict:
    return {
        "fiber_tol": cfg.fiber_tol,
        "algebraic_rel_tol": cfg.algebraic_rel_tol,
        "sdp_tol": cfg.sdp_tol,
        "sdp_max_iter": cfg.sdp_max_iter,
        "equality_tol": cfg.equality_tol,
        "witness_trials": cfg.witness_trials,
        "ancilla_dims": list(cfg.resolved_ancillas(s)),
        "seed": cfg.seed,
    }


def _e(x: float) -> str:
    return f"{x:.3e}"


def cmd_check(args) -> int:
    scenario, label, doc = _resolve_input(args.input)
    cfg = _build_config(args, doc)
    t0 = time.perf_counter()
    report = run_all(scenario, cfg)
    elapsed = time.perf_counter() - t0

    if args.json:
        payload = report_to_json(report, label, _config_echo(cfg, scenario))
        Path(args.json).write_text(dumps(payload), encoding="utf-8")
        print(f"{label}: {report.verdict} (report written to {args.json})")
    else:
        print(f"scenario: {label}  (D={scenario.D} -> d={scenario.d}, "
              f"{len(scenario.cg.kraus)} Kraus operators)")
        print(f"verdict: {report.verdict.upper()}")
        print(f"  fiber preservation : {'yes' if report.fiber_preserved else 'NO'}"
              f"   residual {_e(report.fiber_residual)}")
        found = report.algebraic_v is not None
        print(f"  algebraic intertwiner : {'found' if found else 'not found'}"
              f"   residual {_e(report.algebraic_residual)}"
              + ("" if found else "   (one-sided: absence is inconclusive)"))
        print(f"  dual-identity residual : {_e(report.dual_identity_residual)}")
        print(f"  sdp feasibility : {report.sdp.status}"
              f"   residual {_e(report.sdp.residual)}   iterations {report.sdp.iterations}")
        if report.witness is None:
            print(f"  witness search : none found"
                  f"   (trials={cfg.witness_trials}, ancillas={cfg.resolved_ancillas(scenario)})")
        else:
            w = report.witness
            print(f"  witness search : FOUND (ancilla={w.ancilla_dim}, trial={w.trial})"
                  f"   pg {w.pg_before:.6f} -> {w.pg_after:.6f}   gap {_e(w.gap)}")
        if report.emergent is None:
            print("  effective channel : none")
        else:
            print(f"  effective channel : {len(report.emergent.kraus)} Kraus operator(s)"
                  f"   diagram residual {_e(report.diagram_residual)}")
        print(f"  elapsed : {elapsed:.2f} s")
    return _VERDICT_CODE[report.verdict]


def cmd_construct(args) -> int:
    scenario, label, doc = _resolve_input(args.input)
    cfg = _build_config(args, doc)
    gamma = construct_emergent(scenario, diagram_tol=cfg.fiber_tol, sdp_max_iter=cfg.sdp_max_iter)
    if gamma is None:
        print(f"{label}: no CPTP effective dynamics exists for this scenario",
              file=sys.stderr)
        return EXIT_INCOMPATIBLE
    payload = dumps(channel_to_json(gamma))
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"{label}: effective channel with {len(gamma.kraus)} Kraus operator(s) "
              f"written to {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_COMPATIBLE


def cmd_classical(args) -> int:
    doc = _load_json(args.input)
    block = doc.get("classical")
    if not isinstance(block, dict):
        raise ParseError(f"{args.input} has no 'classical' block")

    if args.emergent:
        if "chain" not in block:
            raise ParseError("classical block has no 'chain' model")
        model = chain_model_from_json(block["chain"])
        table = emergent_channel(model)
        residual = verify_total_probability(model)
        if args.json:
            payload = {
                "version": 1,
                "emergent_table": real_matrix_to_json(table.p),
                "total_probability_residual": residual,
            }
            Path(args.json).write_text(dumps(payload), encoding="utf-8")
            print(f"effective table written to {args.json}")
        else:
            print("effective conditional table P(Y|X):")
            for row in table.p:
                print("  " + "  ".join(f"{x:.12f}" for x in row))
            print(f"total-probability residual: {_e(residual)}")
        return EXIT_COMPATIBLE

    x = args.do
    if "do" not in block:
        raise ParseError("classical block has no 'do' model")
    model = do_model_from_json(block["do"])
    obs, do_vec = observational_vs_do(model, x)
    gap = float(np.abs(obs - do_vec).sum())
    if args.json:
        payload = {
            "version": 1,
            "x": x,
            "do": [float(v) for v in do_vec],
            "observational": [float(v) for v in obs],
            "l1_gap": gap,
        }
        Path(args.json).write_text(dumps(payload), encoding="utf-8")
        print(f"intervention result written to {args.json}")
    else:
        print(f"P(Y | do(X={x}))  = " + "  ".join(f"{v:.12f}" for v in do_vec))
        print(f"P(Y | X={x})      = " + "  ".join(f"{v:.12f}" for v in obs))
        tag = "confounded (intervening differs from conditioning)" if gap > 1e-9 else "identical"
        print(f"L1 gap: {_e(gap)}  -> {tag}")
    return EXIT_COMPATIBLE


def cmd_list(args) -> int:
    for name, entry in registry().items():
        s = entry.scenario
        print(f"{name:26s} D={s.D} d={s.d}  expected={entry.expected:12s} {entry.notes}")
    return EXIT_COMPATIBLE


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    entry = random_scenario(args.D, args.d, args.kraus, seed)
    doc = scenario_to_json(entry.scenario, name=entry.name)
    doc["config"] = {"seed": seed}
    Path(args.out).write_text(dumps(doc), encoding="utf-8")
    print(f"wrote {entry.name} to {args.out}")
    return EXIT_COMPATIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarsekit",
        description="Decide whether a coarse-grained quantum system inherits "
        "a well-defined effective dynamics, and construct it when it does.",
    )
    parser.add_argument("--version", action="version", version=f"coarsekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (fallback: COARSEKIT_SEED, then 0)")
        p.add_argument("--tol", type=float, default=None,
                       help="override the decision tolerances of all criteria")
        p.add_argument("--trials", type=int, default=None,
                       help="witness-search trials per ancilla dimension (0 disables)")
        p.add_argument("--ancilla", type=int, default=None,
                       help="restrict the witness search to one ancilla dimension")
        p.add_argument("--max-iter", type=int, default=None, dest="max_iter",
                       help="iteration cap for the feasibility SDP")

    p_check = sub.add_parser("check", help="run all four compatibility criteria")
    p_check.add_argument("input", help="registry name or scenario file")
    p_check.add_argument("--json", metavar="PATH", help="write a machine-readable report")
    add_common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_cons = sub.add_parser("construct", help="construct the effective channel")
    p_cons.add_argument("input", help="registry name or scenario file")
    p_cons.add_argument("--out", metavar="PATH", help="write the channel here (default: stdout)")
    add_common(p_cons)
    p_cons.set_defaults(func=cmd_construct)

    p_cls = sub.add_parser("classical", help="classical chain: effective table or intervention")
    p_cls.add_argument("input", help="scenario file with a 'classical' block")
    group = p_cls.add_mutually_exclusive_group(required=True)
    group.add_argument("--emergent", action="store_true",
                       help="emit the effective conditional table P(Y|X)")
    group.add_argument("--do", type=int, metavar="X",
                       help="emit P(Y | do(X=x)) next to the observational conditional")
    p_cls.add_argument("--json", metavar="PATH", help="write machine-readable output")
    p_cls.set_defaults(func=cmd_classical)

    p_list = sub.add_parser("list", help="list built-in scenarios")
    p_list.set_defaults(func=cmd_list)

    p_gen = sub.add_parser("gen", help="write a random scenario file")
    p_gen.add_argument("D", type=int, help="microscopic dimension")
    p_gen.add_argument("d", type=int, help="effective dimension")
    p_gen.add_argument("kraus", type=int, help="number of Kraus operators")
    p_gen.add_argument("--out", required=True, metavar="PATH")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MethodDisagreement as exc:
        print(f"internal disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except (ZeroMarginal,) as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CoarsekitError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
