"""Command line entry point: ``uflp-vqa {run,compare,oracle,resources,qubo,draw}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .ansatz import resources
from .hamiltonians import qubo_full, qubo_pfs
from .harness import (ALGORITHMS, ExperimentConfig, build_problem, compare, records_to_csv, run,
                      write_records)
from .model import REGISTRY, brute_force, get_instance, resolve_penalty
from .optimizer import AdamConfig


def _penalty(text: str):
    return "default" if text == "default" else float(text)


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _adam_args(parser):
    parser.add_argument("--lr", type=float, default=0.05, help="Adam learning rate")
    parser.add_argument("--iters", type=int, default=300, help="Adam iterations")
    parser.add_argument("--plateau-stop", action="store_true",
                        help="stop once the loss is flat for 20 iterations")


def _common_output(parser):
    parser.add_argument("--out", default=None, help="output file (stdout if omitted)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--no-timing", action="store_true",
                        help="leave wall_seconds empty so repeated runs are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="uflp-vqa", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="optimize one algorithm on one instance")
    r.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    r.add_argument("--instance", required=True, help="registry key (instance-01..12) or JSON file")
    r.add_argument("--p", type=int, default=1)
    r.add_argument("--lambda", dest="penalty", type=_penalty, default="default")
    r.add_argument("--seeds", type=_int_list, default=[0], help="e.g. 0,1,2 or 0-9")
    r.add_argument("--final-mixer-only", action="store_true",
                   help="VQA-PFS: one mixer after all HEA layers instead of one per layer")
    r.add_argument("--single-optimum", action="store_true",
                   help="score success against one optimal bitstring instead of all")
    r.add_argument("--best-over-trajectory", action="store_true")
    _adam_args(r)
    _common_output(r)

    c = sub.add_parser("compare", help="Cartesian sweep, one row per (instance, algorithm, p, seed)")
    c.add_argument("--instance", type=_str_list, default=["instance-01"],
                   help="comma-separated keys or files")
    c.add_argument("--algorithm", type=_str_list, default=list(ALGORITHMS))
    c.add_argument("--p", type=_int_list, default=[1])
    c.add_argument("--lambda", dest="penalty", type=_penalty, default="default")
    c.add_argument("--seeds", type=_int_list, default=[0])
    c.add_argument("--jobs", type=int, default=1)
    _adam_args(c)
    _common_output(c)

    o = sub.add_parser("oracle", help="brute-force optimum of instances")
    o.add_argument("--instance", type=_str_list, default=sorted(REGISTRY))
    o.add_argument("--lambda", dest="penalty", type=_penalty, default="default")

    s = sub.add_parser("resources", help="print the resource report of a circuit")
    s.add_argument("--algorithm", type=_str_list, default=list(ALGORITHMS))
    s.add_argument("--instance", default="instance-01")
    s.add_argument("--p", type=_int_list, default=[2])
    s.add_argument("--lambda", dest="penalty", type=_penalty, default="default")

    q = sub.add_parser("qubo", help="dump QUBO coefficients as JSON")
    q.add_argument("--instance", default="instance-01")
    q.add_argument("--variant", choices=("pfs", "full"), default="pfs")
    q.add_argument("--lambda", dest="penalty", type=_penalty, default="default")

    d = sub.add_parser("draw", help="text diagram of a circuit")
    d.add_argument("--algorithm", choices=ALGORITHMS, default="vqa-pfs")
    d.add_argument("--instance", default="instance-01")
    d.add_argument("--p", type=int, default=1)
    return ap


def _emit(records, args) -> None:
    if args.out:
        write_records(records, args.out, args.format)
        print(f"wrote {args.out}", file=sys.stderr)
        return
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in records], indent=2))
    else:
        sys.stdout.write(records_to_csv(records))


def _cmd_run(args) -> int:
    adam = AdamConfig(learning_rate=args.lr, max_iters=args.iters, plateau_stop=args.plateau_stop)
    cfg = ExperimentConfig(
        algorithm=args.algorithm, instance=args.instance, p=args.p, penalty=args.penalty,
        seeds=args.seeds, adam=adam, output=args.out, format=args.format,
        final_mixer_only=args.final_mixer_only, single_optimum=args.single_optimum,
        best_over_trajectory=args.best_over_trajectory, timing=not args.no_timing,
    )
    record = run(cfg, write=False)
    _emit([record], args)
    return 0


def _cmd_compare(args) -> int:
    adam = AdamConfig(learning_rate=args.lr, max_iters=args.iters, plateau_stop=args.plateau_stop)
    records = compare(args.instance, args.algorithm, args.p, args.seeds, penalty=args.penalty,
                      adam=adam, timing=not args.no_timing, n_jobs=args.jobs)
    _emit(records, args)
    return 0


def _cmd_oracle(args) -> int:
    failures = 0
    t0 = time.perf_counter()
    print(f"{'instance':<14}{'m x n':>7}{'qubits':>8}{'lambda':>9}{'optimum':>10}{'table':>8}  status")
    for key in args.instance:
        inst = get_instance(key)
        lam = resolve_penalty(inst, args.penalty)
        res = brute_force(inst, lam)
        known = inst.known_optimal
        if known is None:
            status = "-"
        elif res.optimal_value == known:
            status = "ok"
        else:
            status = "MISMATCH"
            failures += 1
        print(f"{inst.name:<14}{f'{inst.m}x{inst.n}':>7}{inst.layout.total_qubits:>8}{lam:>9g}"
              f"{res.optimal_value:>10g}{'' if known is None else f'{known:g}':>8}  {status}")
    print(f"{time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 1 if failures else 0


def _cmd_resources(args) -> int:
    print(f"{'algorithm':<11}{'p':>3}{'depth':>7}{'cnots':>7}{'param_gates':>13}{'params':>8}")
    for alg in args.algorithm:
        for p in args.p:
            prob = build_problem(args.instance, alg, p, args.penalty)
            rep = resources(prob.circuit, prob.qubo if prob.circuit.has_phase else None)
            print(f"{alg:<11}{p:>3}{rep.depth:>7}{rep.cnot_count:>7}{rep.param_gate_count:>13}"
                  f"{rep.param_count:>8}")
    return 0


def _cmd_qubo(args) -> int:
    inst = get_instance(args.instance)
    lam = resolve_penalty(inst, args.penalty)
    q = qubo_pfs(inst, lam) if args.variant == "pfs" else qubo_full(inst, lam)
    print(q.dumps())
    return 0


def _cmd_draw(args) -> int:
    prob = build_problem(args.instance, args.algorithm, args.p)
    print(prob.circuit.draw())
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {
        "run": _cmd_run, "compare": _cmd_compare, "oracle": _cmd_oracle,
        "resources": _cmd_resources, "qubo": _cmd_qubo, "draw": _cmd_draw,
    }[args.command]
    try:
        return handler(args)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
