# -*- coding: utf-8 -*-
# Описание: Командная строка: генерация сетей, дизайн, рандомизация, оценка, диагностика, симуляции.

import argparse
import logging
import os
import sys
from typing import List, Optional

import jsonpickle
import numpy as np

from egocluster.baselines import DESIGNS
from egocluster.clustering import EgoClustering, design_summary, read_clustering, write_clustering, \
    write_design_stats
from egocluster.config import DesignConfig, SimConfig
from egocluster.ego_design import TARGETS, build_design_restarts, target_lambda
from egocluster.graph import Graph, InputMismatchError, dump_edge_list, load_edge_list_file
from egocluster.inference import assumption_report, dependency_diagnostics, estimate, format_table
from egocluster.randomization import assign, assignment_balance, exposures, read_assignment, \
    write_assignment, write_exposures, write_unit_table
from egocluster.settings import CONFIGS_PATHS
from egocluster.simulation.generators import gen_ba, gen_community, gen_er
from egocluster.simulation.outcomes import read_covariates, read_outcomes, simulate_outcomes
from egocluster.simulation.report import emit_power, emit_report
from egocluster.simulation.study import DEFAULT_EFFECTS, ESTIMANDS, make_design, run_power_grid, run_study
from egocluster.util.atomic import atomic_open

FORMATS_HELP = """file formats:
  edge list      lines "u v" with nonnegative integer ids; '#' comments and blank lines
                 are skipped; optional header "nodes: N" declares units 0..N-1
  clustering     TSV header unit, cluster, ego (ego is 1 for the cluster's ego)
  design stats   TSV sidecar <clustering>.stats.tsv with K_n, r_bar, b_n, objective, lambda, seed
  assignment     TSV header unit, treatment (0 or 1)
  exposures      TSV header unit, rho
  outcomes       TSV header unit, outcome
  covariates     TSV header unit, z1, z2, ...
  sim config     JSON document with the SimConfig fields; unknown keys are rejected
"""


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _read_lines(filename: str) -> List[str]:
    with open(filename, "r", encoding="utf-8") as f:
        return f.read().split("\n")


def _write(filename: str, content) -> None:
    mode = "wb" if isinstance(content, bytes) else "w"
    with atomic_open(filename, mode) as f:
        f.write(content)
    logging.info("wrote %s", filename)


def _load_clustering(g: Graph, filename: str, lambda_: float = 1.0) -> EgoClustering:
    return read_clustering(g, _read_lines(filename), lambda_=lambda_, design="loaded")


def _sim_config(name: str, quiet: bool) -> SimConfig:
    path = CONFIGS_PATHS.get(name, name)
    cfg = SimConfig().load(path)
    if quiet:
        cfg.progress = False
    return cfg


def cmd_generate(args) -> None:
    rng = np.random.default_rng(args.seed)
    z = None
    if args.kind == "er":
        g = gen_er(args.n, args.p, rng)
    elif args.kind == "ba":
        g = gen_ba(args.n, args.m, rng)
    else:
        g, z = gen_community(args.n, args.communities, args.ratio, args.target_degree, rng)
    _write(args.out, dump_edge_list(g))
    if z is not None:
        _write(args.out + ".z.tsv", write_unit_table(g, "z1", [repr(float(value)) for value in z]))


def cmd_design(args) -> None:
    g = load_edge_list_file(args.edges, progress=not args.quiet)
    cfg = DesignConfig()
    if args.config:
        cfg.load(args.config)
    else:
        cfg.update({"target": args.target, "lambda_": args.lambda_, "seed": args.seed,
                    "restarts": args.restarts, "workers": args.threads,
                    "predetermined_egos": args.predetermined_egos})
    lambda_ = target_lambda(cfg.target, cfg.lambda_) if args.method == "ego_cr" else args.lambda_
    if args.method == "ego_cr":
        egos = []
        for unit in cfg.predetermined_egos:
            if unit not in g.index_of:
                raise InputMismatchError(unit, "predetermined ego not present in graph")
            egos.append(g.index_of[unit])
        c = build_design_restarts(g, lambda_, cfg.seeds(), cfg.workers, egos)
    else:
        c = make_design(g, args.method, cfg.seed, lambda_)
    _write(args.out, write_clustering(g, c))
    _write(args.out + ".stats.tsv", write_design_stats(design_summary(g, c)))
    print(repr(c))


def cmd_randomize(args) -> None:
    g = load_edge_list_file(args.edges, progress=not args.quiet)
    c = _load_clustering(g, args.clustering)
    a = assign(c, np.random.default_rng(args.seed))
    _write(args.out, write_assignment(g, a))
    if args.exposures:
        _write(args.exposures, write_exposures(g, exposures(g, a.T)))
    n1, n0, share = assignment_balance(a)
    print("treated {}, control {}, share {:.4f}".format(n1, n0, share))


def cmd_outcomes(args) -> None:
    g = load_edge_list_file(args.edges, progress=not args.quiet)
    a = read_assignment(g, None, _read_lines(args.assignment))
    z = read_covariates(g, _read_lines(args.covariates)) if args.covariates else None
    eta = [float(value) for value in args.eta.split(",")]
    y = simulate_outcomes(g, a.T, exposures(g, a.T), args.alpha, args.beta, args.gamma, args.error_model,
                          np.random.default_rng(args.seed), sigma=args.sigma, eta=eta, z=z)
    _write(args.out, write_unit_table(g, "outcome", [repr(float(value)) for value in y]))


def cmd_estimate(args) -> None:
    g = load_edge_list_file(args.edges, progress=not args.quiet)
    c = _load_clustering(g, args.clustering)
    a = read_assignment(g, c, _read_lines(args.assignment))
    y = read_outcomes(g, _read_lines(args.outcomes))
    result = estimate(g, c, a.T, exposures(g, a.T), y, args.level)
    _write(args.out, result.to_json() + "\n")
    sys.stdout.write(format_table(result))


def cmd_diagnose(args) -> None:
    g = load_edge_list_file(args.edges, progress=not args.quiet)
    c = _load_clustering(g, args.clustering)
    diag = dependency_diagnostics(g, c)
    document = dict(diag.__dict__)
    document["n"] = g.n
    document["assumptions"] = assumption_report(diag, g.n)
    _write(args.out, jsonpickle.encode(document, unpicklable=False, indent=4) + "\n")
    print(repr(diag))


def cmd_simulate(args) -> None:
    cfg = _sim_config(args.config, args.quiet)
    report = run_study(cfg, args.threads)
    markdown = emit_report(report, "markdown")
    _write(os.path.join(args.out_dir, "report.csv"), emit_report(report, "csv"))
    _write(os.path.join(args.out_dir, "report.md"), markdown)
    sys.stdout.write(markdown.decode("utf-8"))


def cmd_power(args) -> None:
    cfg = _sim_config(args.config, args.quiet)
    effects = [float(value) for value in args.effects.split(",")]
    table = run_power_grid(cfg, args.estimand, effects, args.threads)
    markdown = emit_power(table, "markdown")
    _write(os.path.join(args.out_dir, "power_{}.csv".format(args.estimand)), emit_power(table, "csv"))
    _write(os.path.join(args.out_dir, "power_{}.md".format(args.estimand)), markdown)
    sys.stdout.write(markdown.decode("utf-8"))


def _egos(text: str) -> List[int]:
    return [int(token) for token in text.split(",") if token.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egocluster", description="Ego-cluster designs for randomized experiments on networks.",
        epilog=FORMATS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings only, no progress bars")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="generate a random network edge list")
    generate.add_argument("--kind", choices=("er", "ba", "community"), required=True)
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--p", type=float, default=0.015)
    generate.add_argument("--m", type=int, default=6)
    generate.add_argument("--communities", type=int, default=4)
    generate.add_argument("--ratio", type=float, default=8.0)
    generate.add_argument("--target-degree", type=float, default=11.0)
    generate.add_argument("--seed", type=_seed, required=True)
    generate.add_argument("--out", required=True)
    generate.set_defaults(handler=cmd_generate)

    design = commands.add_parser("design", help="build a clustering and its stats sidecar")
    design.add_argument("--edges", required=True)
    design.add_argument("--method", choices=DESIGNS, default="ego_cr")
    design.add_argument("--target", choices=TARGETS, default="tau")
    design.add_argument("--lambda", dest="lambda_", type=float, default=1.0)
    design.add_argument("--seed", type=_seed, required=True)
    design.add_argument("--restarts", type=int, default=1)
    design.add_argument("--threads", type=int, default=1)
    design.add_argument("--predetermined-egos", type=_egos, default=[])
    design.add_argument("--config", help="DesignConfig JSON; overrides the flags above")
    design.add_argument("--out", required=True)
    design.set_defaults(handler=cmd_design)

    randomize = commands.add_parser("randomize", help="draw cluster-level treatments")
    randomize.add_argument("--edges", required=True)
    randomize.add_argument("--clustering", required=True)
    randomize.add_argument("--seed", type=_seed, required=True)
    randomize.add_argument("--exposures", help="also write the exposure TSV")
    randomize.add_argument("--out", required=True)
    randomize.set_defaults(handler=cmd_randomize)

    outcomes = commands.add_parser("outcomes", help="simulate outcomes for an assignment")
    outcomes.add_argument("--edges", required=True)
    outcomes.add_argument("--assignment", required=True)
    outcomes.add_argument("--alpha", type=float, default=2.0)
    outcomes.add_argument("--beta", type=float, default=2.5)
    outcomes.add_argument("--gamma", type=float, default=5.0)
    outcomes.add_argument("--sigma", type=float, default=1.0)
    outcomes.add_argument("--error-model", choices=("iid_normal", "correlated", "confounded"),
                          default="iid_normal")
    outcomes.add_argument("--eta", default="0.8")
    outcomes.add_argument("--covariates")
    outcomes.add_argument("--seed", type=_seed, required=True)
    outcomes.add_argument("--out", required=True)
    outcomes.set_defaults(handler=cmd_outcomes)

    estimate_parser = commands.add_parser("estimate", help="estimate effects with standard errors")
    estimate_parser.add_argument("--edges", required=True)
    estimate_parser.add_argument("--clustering", required=True)
    estimate_parser.add_argument("--assignment", required=True)
    estimate_parser.add_argument("--outcomes", required=True)
    estimate_parser.add_argument("--level", type=float, default=0.05)
    estimate_parser.add_argument("--out", required=True)
    estimate_parser.set_defaults(handler=cmd_estimate)

    diagnose = commands.add_parser("diagnose", help="dependency graph diagnostics")
    diagnose.add_argument("--edges", required=True)
    diagnose.add_argument("--clustering", required=True)
    diagnose.add_argument("--out", required=True)
    diagnose.set_defaults(handler=cmd_diagnose)

    threads = os.cpu_count() or 1
    simulate = commands.add_parser("simulate", help="run a simulation study")
    simulate.add_argument("--config", required=True, help="JSON path or bundled config name")
    simulate.add_argument("--threads", type=int, default=threads)
    simulate.add_argument("--out-dir", required=True)
    simulate.set_defaults(handler=cmd_simulate)

    power = commands.add_parser("power", help="rejection rates over effect sizes")
    power.add_argument("--config", required=True, help="JSON path or bundled config name")
    power.add_argument("--estimand", choices=ESTIMANDS, required=True)
    power.add_argument("--effects", default=",".join(str(effect) for effect in DEFAULT_EFFECTS))
    power.add_argument("--threads", type=int, default=threads)
    power.add_argument("--out-dir", required=True)
    power.set_defaults(handler=cmd_power)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level)
    try:
        args.handler(args)
    except Exception as e:
        sys.stderr.write("error: {}\n".format(str(e).splitlines()[0] if str(e) else type(e).__name__))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
