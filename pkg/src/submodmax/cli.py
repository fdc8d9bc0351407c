"""``submodmax`` command line: run sweeps, generate graphs, brute-force OPT, audit objectives."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ConfigError, build_objective, load_config, resolve_k_values, run_experiment, summary_path
from .objectives import MaxCut, RevMax, gen_er, gen_revmax_params, write_edge_list
from .oracle import BRUTE_FORCE_LIMIT, ValueOracle, brute_force_opt, check_submodular

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="submodmax", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run the sweep described by a TOML config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--output", type=Path, help="override the config's output path")
    run.add_argument("--no-timing", action="store_true", help="leave wall_ms empty for reproducible bytes")
    run.add_argument("--records", type=Path, help="also write one JSON line per run record")

    gen = sub.add_parser("gen-er", help="write a seeded Erdos-Renyi graph as an edge list")
    gen.add_argument("--n", required=True, type=int)
    gen.add_argument("--p", required=True, type=float)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--out", required=True, type=Path)

    opt = sub.add_parser("opt", help=f"brute-force OPT for each k (n <= {BRUTE_FORCE_LIMIT})")
    opt.add_argument("--config", required=True, type=Path)

    chk = sub.add_parser("check", help="sampled submodularity and non-negativity audit")
    chk.add_argument("--objective", required=True, choices=("maxcut", "revmax"))
    chk.add_argument("--n", type=int, default=60)
    chk.add_argument("--p", type=float, default=0.1)
    chk.add_argument("--trials", type=int, default=1000)
    chk.add_argument("--seed", type=int, default=0)
    return p


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output:
        cfg.output = args.output
    if args.no_timing:
        cfg.timing = False
    result = run_experiment(cfg)
    if args.records:
        args.records.parent.mkdir(parents=True, exist_ok=True)
        with args.records.open("w") as fh:
            for (label, k), runs in result.records.items():
                for rep, rec in enumerate(runs):
                    solution, value, queries, rounds, seed = rec.row()
                    row = {"algorithm": label, "k": k, "rep": rep, "seed": seed, "solution": list(solution),
                           "value": value, "queries": queries, "rounds": rounds}
                    fh.write(json.dumps(row, sort_keys=True) + "\n")
    print(f"wrote {len(result.rows)} rows to {cfg.output} and {summary_path(cfg.output)}")
    return EXIT_OK


def _cmd_gen_er(args) -> int:
    g = gen_er(args.n, args.p, args.seed)
    write_edge_list(g, args.out, header=f"er n={args.n} p={args.p} seed={args.seed}")
    print(f"wrote {g.num_edges} edges on {g.n} vertices to {args.out}")
    return EXIT_OK


def _cmd_opt(args) -> int:
    cfg = load_config(args.config)
    objective = build_objective(cfg)
    if objective.n > BRUTE_FORCE_LIMIT:
        raise ConfigError(f"opt needs n <= {BRUTE_FORCE_LIMIT}, dataset has n={objective.n}")
    for k in resolve_k_values(cfg, objective.n):
        best, value = brute_force_opt(ValueOracle(objective), k)
        print(f"k={k} opt={value!r} set={list(best.as_tuple())}")
    return EXIT_OK


def _cmd_check(args) -> int:
    g = gen_er(args.n, args.p, args.seed)
    objective = MaxCut(g) if args.objective == "maxcut" else RevMax(g, gen_revmax_params(g, args.seed))
    report = check_submodular(ValueOracle(objective), args.trials, seed=args.seed)
    print(report)
    return EXIT_OK if report.ok else EXIT_RUNTIME


COMMANDS = {"run": _cmd_run, "gen-er": _cmd_gen_er, "opt": _cmd_opt, "check": _cmd_check}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report any failure as a runtime error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
