"""Command-line front end.

Subcommands: solve, simulate, search, asymptotic, relax (and a hidden
verify). Angles are shown in degrees; everything internal is radians.

Exit codes: 0 ok, 1 verify failure, 2 parse error, 3 no feasible order,
4 dimension mismatch, 5 optimizer failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Any

from pseudopure.errors import DegenerateInitial, Infeasible, OptimizerFailure, UnsupportedSpec
from pseudopure.exactsolver import GateOrder, solve_all
from pseudopure.gatekernel import apply_gate
from pseudopure.netio import (
    NetworkFile,
    ParseError,
    load_config,
    load_network,
    load_state,
    network_from_mapping,
    parse_thermal_flag,
    state_from_mapping,
)
from pseudopure.netsearch import (
    AngleMode,
    Family,
    SearchSpec,
    Topology,
    asymptotic_survey,
    group_classes,
    run_search,
)
from pseudopure.relaxmodel import RelaxationParams, relaxed_trace
from pseudopure.statemodel import PopulationState, epsilon, thermal_state

EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_MISMATCH = 4
EXIT_OPTIMIZER = 5


class DimensionMismatch(Exception):
    pass


def _setting(args, cfg: dict, name: str, default: Any = None) -> Any:
    """Flag value if given, else config value, else ``default``."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return cfg.get(name, default)


def _state(args, cfg: dict, default: PopulationState | None = None) -> PopulationState:
    if args.state is not None and args.thermal is not None:
        raise ParseError("give either --state or --thermal, not both")
    if args.state is not None:
        return load_state(args.state)
    if args.thermal is not None:
        return parse_thermal_flag(args.thermal)
    keys = {"state", "thermal", "populations"} & set(cfg)
    if len(keys) > 1:
        raise ParseError("config gives more than one state source")
    if "state" in cfg:
        if isinstance(cfg["state"], str):
            return load_state(cfg["state"])
        return state_from_mapping(cfg["state"])
    if keys:
        key = keys.pop()
        return state_from_mapping({key: cfg[key]})
    if default is not None:
        return default
    raise ParseError("no initial state: use --state FILE or --thermal p1,p2[,...]")


def _network(args, cfg: dict) -> NetworkFile:
    if args.network is not None:
        return load_network(args.network)
    spec = cfg.get("network")
    if spec is None:
        raise ParseError("no network: use --network FILE")
    if isinstance(spec, str):
        return load_network(spec)
    return network_from_mapping(spec)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt_pops(pops) -> str:
    return " ".join(f"{v:.6f}" for v in pops)


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args, cfg) -> int:
    state = _state(args, cfg)
    if state.n_qubits != 2:
        raise DimensionMismatch(f"solve needs a two-qubit state, got {state.n_qubits} qubits")
    sols = solve_all(state)
    for order in GateOrder:
        sol = sols[order]
        if isinstance(sol, Infeasible):
            reason = str(sol).removeprefix(f"{order.value}: ")
            print(f"{order.value}: infeasible ({reason})")
        else:
            t1, t2 = sol.degrees
            print(f"{order.value}: θ1={t1:.4f}°, θ2={t2:.4f}°")
    if all(isinstance(s, Infeasible) for s in sols.values()):
        return EXIT_INFEASIBLE
    return 0


def cmd_simulate(args, cfg) -> int:
    state = _state(args, cfg)
    nf = _network(args, cfg)
    if nf.n_qubits != state.n_qubits:
        raise DimensionMismatch(f"network is for {nf.n_qubits} qubits, state has {state.n_qubits}")
    repeat = _setting(args, cfg, "repeat", nf.network.repetitions)
    initial = state
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "round", "gate", "pops", "eps"])
    w.writerow([0, 0, "", _fmt_pops(state.pops), f"{epsilon(state, initial):.12e}"])
    step = 0
    for rnd in range(1, repeat + 1):
        for g in nf.network.gates:
            step += 1
            state = apply_gate(state, g)
            w.writerow([step, rnd, str(g), _fmt_pops(state.pops), f"{epsilon(state, initial):.12e}"])
    _emit(buf.getvalue(), args.out)
    print(f"final pops: {_fmt_pops(state.pops)}")
    print(f"final eps: {epsilon(state, initial):.12e}")
    return 0


def _search_spec(args, cfg, family_default: str, mode_default: str) -> SearchSpec:
    try:
        topology_kind = _setting(args, cfg, "topology", "all-pairs")
        family = Family(_setting(args, cfg, "family", family_default))
        mode = AngleMode(_setting(args, cfg, "mode", mode_default))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    has_state = any(x is not None for x in (args.state, args.thermal)) or bool(
        {"state", "thermal", "populations"} & set(cfg)
    )
    n = _state(args, cfg).n_qubits if has_state else 3
    topology = Topology(topology_kind, n)
    p = _setting(args, cfg, "p")
    if p is None:
        if family is not Family.PERMUTATION:
            raise ParseError("--p is required for this family")
        p = len(topology.gates())
    initial = _state(args, cfg, thermal_state([1.0] * n))
    return SearchSpec(
        topology=topology,
        p=int(p),
        angle_mode=mode,
        family=family,
        repetitions=int(_setting(args, cfg, "repeat", 1)),
        initial=initial,
        perfect_threshold=float(_setting(args, cfg, "perfect_threshold", 1e-7)),
        seed=int(_setting(args, cfg, "seed", 0)),
    )


def search_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["network_id", "gate_list", "angles_deg", "eps", "perfect"])
    for res in report.results:
        w.writerow(
            [
                res.network_id,
                res.gate_list,
                ";".join(f"{a:.4f}" for a in res.angles_deg),
                f"{res.eps:.12e}",
                "true" if res.perfect else "false",
            ]
        )
    return buf.getvalue()


def cmd_search(args, cfg) -> int:
    spec = _search_spec(args, cfg, "sequential", "continuous")
    report = run_search(spec, workers=int(_setting(args, cfg, "workers", 1)))
    text = search_csv(report)
    if args.out:
        Path(args.out).write_text(text)
    print(report.summary())
    return 0


def cmd_asymptotic(args, cfg) -> int:
    spec = _search_spec(args, cfg, "permutation", "half-pi")
    r_max = int(_setting(args, cfg, "r_max", 5))
    rows = asymptotic_survey(spec, r_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["network_rank", "r", "eps"])
    for row in rows:
        for r, e in enumerate(row.eps, start=1):
            w.writerow([row.rank, r, f"{e:.12e}"])
    _emit(buf.getvalue(), args.out)
    first = [row.eps[0] for row in rows]
    classes = group_classes(first)
    summary = ", ".join(f"{first[g[0]]:.4f} x{len(g)}" for g in classes)
    print(f"networks: {len(rows)}", file=sys.stderr if not args.out else sys.stdout)
    print(f"eps(r=1) classes: {summary}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def _relaxation(args, cfg, equilibrium: PopulationState) -> RelaxationParams:
    block = dict(cfg.get("relaxation") or {})
    n = equilibrium.n_qubits

    def times(flag, key):
        raw = flag if flag is not None else block.get(key, math.inf)
        if isinstance(raw, str):
            raw = [float(x) for x in raw.split(",")]
        if not isinstance(raw, (list, tuple)):
            raw = [raw]
        if len(raw) == 1:
            raw = list(raw) * n
        return tuple(float(x) for x in raw)

    try:
        duration = args.gate_duration if args.gate_duration is not None else block.get("gate_duration", 0.0)
        eq = equilibrium
        if "equilibrium" in block:
            eq = state_from_mapping(block["equilibrium"])
        return RelaxationParams(times(args.t1, "t1"), times(args.t2, "t2"), float(duration), eq)
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"relaxation parameters: {exc}") from None


def cmd_relax(args, cfg) -> int:
    state = _state(args, cfg)
    nf = _network(args, cfg)
    if nf.n_qubits != state.n_qubits:
        raise DimensionMismatch(f"network is for {nf.n_qubits} qubits, state has {state.n_qubits}")
    params = _relaxation(args, cfg, state)
    if params.n_qubits != state.n_qubits:
        raise DimensionMismatch("equilibrium and state sizes differ")
    rounds = int(_setting(args, cfg, "r_max", nf.network.repetitions))
    trace = relaxed_trace(state, nf.network.gates, params, rounds)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["round", "pops", "eps", "deviation_scale"])
    for rnd, (s, scale) in enumerate(trace, start=1):
        w.writerow([rnd, _fmt_pops(s.pops), f"{epsilon(s, state):.12e}", f"{scale:.12e}"])
    _emit(buf.getvalue(), args.out)
    final, scale = trace[-1]
    print(f"final pops: {_fmt_pops(final.pops)}")
    print(f"final eps: {epsilon(final, state):.12e}")
    print(f"deviation_scale: {scale:.12e}")
    return 0


def cmd_verify(args, cfg) -> int:
    from pseudopure.selfcheck import run_checks

    checks = run_checks(seed=int(_setting(args, cfg, "seed", 0)))
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in checks) else EXIT_VERIFY


COMMANDS = {
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "search": cmd_search,
    "asymptotic": cmd_asymptotic,
    "relax": cmd_relax,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config; flags override its values")
    common.add_argument("--state", help="YAML state file (populations or thermal)")
    common.add_argument("--thermal", help="thermal polarizations, e.g. 1,1 or 2,1")
    common.add_argument("--network", help="network file")
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="write CSV here")
    common.add_argument("--r-max", dest="r_max", type=int)
    common.add_argument("--repeat", type=int, help="network repetitions")
    common.add_argument("--topology", choices=["all-pairs", "chain"])
    common.add_argument("--mode", choices=[m.value for m in AngleMode])
    common.add_argument("--family", choices=[f.value for f in Family])
    common.add_argument("--p", type=int, help="gates per network")
    common.add_argument("--perfect-threshold", dest="perfect_threshold", type=float)
    common.add_argument("--t1", help="T1 in seconds (one value or comma list)")
    common.add_argument("--t2", help="T2 in seconds (one value or comma list)")
    common.add_argument("--gate-duration", dest="gate_duration", type=float)

    parser = argparse.ArgumentParser(prog="pseudopure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="{solve,simulate,search,asymptotic,relax}")
    sub.add_parser("solve", parents=[common], help="exact two-qubit angles for both gate orders")
    sub.add_parser("simulate", parents=[common], help="apply a network file to a state")
    sub.add_parser("search", parents=[common], help="enumerate and optimise gate networks")
    sub.add_parser("asymptotic", parents=[common], help="epsilon(r) for every permutation network")
    sub.add_parser("relax", parents=[common], help="apply a network with T1/T2 relaxation")
    sub.add_parser("verify", parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        return COMMANDS[args.command](args, cfg)
    except (ParseError, UnsupportedSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateInitial as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except OptimizerFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER


if __name__ == "__main__":
    sys.exit(main())
