#!/usr/bin/env python3
"""
Wireless VNE CLI - topology generation, single embeddings, feasibility checks and experiments
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from dotenv import load_dotenv

from wireless_vne import __version__
from wireless_vne.config.preset_manager import PresetManager
from wireless_vne.config.settings import CheckerSettings, SubstrateSettings, load_config
from wireless_vne.embedding.embedder import Embedder
from wireless_vne.embedding.metrics import sigma
from wireless_vne.engine.experiment_runner import run_replications, write_metrics_csv
from wireless_vne.engine.plot_data import plot_series
from wireless_vne.engine.sweep_executor import SweepExecutor, SweepPlan, write_sweep_csv
from wireless_vne.model.embedding import AlgorithmVariant
from wireless_vne.model.network import ResourceLedger
from wireless_vne.network.generators import RequestParams, derive_seed, generate_vn_request
from wireless_vne.network.network_io import load_check_input, load_requests, load_substrate, save_requests, save_substrate
from wireless_vne.registry.checker_registry import CheckerRegistry

_logger = logging.getLogger("wireless_vne.cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECTED = 2


class CliArgumentParser(argparse.ArgumentParser):
    """argparse 預設以 2 結束，但 2 保留給拒絕/不可行，因此改為 1。"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _output_path(path: Optional[str], default_name: str) -> Path:
    if path:
        return Path(path)
    out_dir = Path(os.getenv("WEM_OUTPUT_DIR", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / default_name


def _print_json(data) -> None:
    print(json.dumps(data, ensure_ascii=False, indent=2))


def _checker_settings(args: argparse.Namespace) -> CheckerSettings:
    return CheckerSettings(method=args.method, epsilon=args.epsilon, horizon=args.horizon,
                           stochastic=args.stochastic, max_vertices=args.max_vertices)


def cmd_gen_topology(args: argparse.Namespace) -> int:
    settings = SubstrateSettings(kind=args.kind, n_nodes=args.nodes, square_side=args.side, density=args.density,
                                 grid_width=args.grid_width, grid_height=args.grid_height)
    sn = settings.build(args.seed, args.interference_hops)
    path = _output_path(args.out, "substrate.json")
    save_substrate(sn, path)
    _logger.info("wrote substrate with %d nodes and %d links to %s", len(sn.nodes), len(sn.links), path)
    print(path)
    return EXIT_OK


def cmd_gen_requests(args: argparse.Namespace) -> int:
    params = RequestParams(shape=args.shape, mean_duration=args.mean_duration)
    requests = [
        generate_vn_request(params, seed=derive_seed(args.seed, i), vn_id=f"vn-{i}", arrival_window=0)
        for i in range(args.count)
    ]
    path = _output_path(args.out, "requests.json")
    save_requests(requests, path)
    print(path)
    return EXIT_OK


def cmd_embed(args: argparse.Namespace) -> int:
    sn = load_substrate(args.substrate)
    requests = load_requests(args.request)
    settings = _checker_settings(args)
    checker = CheckerRegistry().create(settings.method, **settings.params(args.seed))
    embedder = Embedder(checker, AlgorithmVariant.from_name(args.algorithm), args.k_search, args.alpha)

    ledger = ResourceLedger.fresh(sn)
    active = []
    outputs = []
    status = EXIT_OK
    for vn in requests:
        embedding = embedder.embed(sn, ledger, active, vn)
        if embedding is None:
            outputs.append({"vn_id": vn.vn_id, "accepted": False, "candidates": len(embedder.last_candidates)})
            status = EXIT_REJECTED
            continue
        outputs.append({"vn_id": vn.vn_id, "accepted": True, "sigma": sigma(sn, active, embedding),
                        "embedding": embedding.to_record()})
        ledger.commit(sn, embedding)
        active.append(embedding)
    _print_json(outputs[0] if len(outputs) == 1 else outputs)
    return status


def cmd_check(args: argparse.Namespace) -> int:
    sn, loads = load_check_input(args.input)
    settings = _checker_settings(args)
    verdict = CheckerRegistry().execute_check(settings.method, cg=sn.conflict_graph, loads=loads,
                                              raise_on_error=True, **settings.params(args.seed))
    _print_json(verdict.to_record())
    return EXIT_OK if verdict.feasible else EXIT_REJECTED


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.overrides)
    results = run_replications(config, args.workers)
    out = _output_path(args.out, "metrics.csv")
    summaries = []
    for result in results:
        path = out if len(results) == 1 else out.with_name(f"{out.stem}_seed{result.seed}{out.suffix}")
        write_metrics_csv(result, path)
        summary = {"seed": result.seed, "csv": str(path), **result.summary}
        if not config.timing:
            summary.pop("embed_time_ms", None)
        summaries.append(summary)
    _print_json(summaries[0] if len(summaries) == 1 else summaries)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    preset = PresetManager().get(args.preset)
    overrides = list(args.overrides)
    if args.timing:
        overrides.append("timing=true")
    base = load_config(args.config, overrides)
    plan = SweepPlan.from_preset(preset, base)
    frame = SweepExecutor(args.workers or base.max_workers).execute_plan(plan, base)
    path = _output_path(args.out, f"sweep_{args.preset}.csv")
    write_sweep_csv(frame, path)
    print(path)
    return EXIT_OK


def cmd_plot_data(args: argparse.Namespace) -> int:
    frame = pd.read_csv(args.input)
    x, series = args.x, args.series
    if args.preset:
        preset = PresetManager().get(args.preset)
        x, series = x or preset.x, series or preset.series
    if not x:
        raise ValueError("plot-data 必須提供 --preset 或 --x。")
    out = plot_series(frame, x, series, args.metric)
    path = _output_path(args.out, f"plot_{Path(args.input).stem}.csv")
    out.to_csv(path, index=False, float_format="%.10g")
    print(path)
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    manager = PresetManager()
    for name in manager.names():
        preset = manager.get(name)
        print(f"{name}: {preset.description} ({len(preset.cells())} cells)")
    return EXIT_OK


def _add_checker_flags(parser: argparse.ArgumentParser, default_method: str) -> None:
    parser.add_argument("--method", choices=CheckerRegistry().names(), default=default_method,
                        help="feasibility checking method")
    parser.add_argument("--epsilon", type=float, default=0.3)
    parser.add_argument("--horizon", type=int, default=2000)
    parser.add_argument("--stochastic", action="store_true", help="Bernoulli arrivals in the simulation check")
    parser.add_argument("--max-vertices", type=int, default=20, help="size limit of the exact oracle")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        description="Wireless VNE - 無線虛擬網路嵌入模擬器",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--version", "-v", action="version", version=f"Wireless VNE {__version__}")
    parser.add_argument("--log-level", default=None, help="logging level (default: $WEM_LOG_LEVEL or WARNING)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands", parser_class=CliArgumentParser)

    topo = subparsers.add_parser("gen-topology", help="Generate a substrate network file")
    topo.add_argument("--kind", choices=["random", "grid"], default="random")
    topo.add_argument("--nodes", type=int, default=50)
    topo.add_argument("--side", type=float, default=100.0)
    topo.add_argument("--density", choices=["high", "middle", "low"], default="middle")
    topo.add_argument("--grid-width", type=int, default=7)
    topo.add_argument("--grid-height", type=int, default=7)
    topo.add_argument("--interference-hops", type=int, default=2)
    topo.add_argument("--seed", type=int, default=0)
    topo.add_argument("--out")
    topo.set_defaults(handler=cmd_gen_topology)

    reqs = subparsers.add_parser("gen-requests", help="Generate a virtual network request file")
    reqs.add_argument("--count", type=int, default=10)
    reqs.add_argument("--shape", choices=["random", "star", "tree", "hub_and_spoke"], default="random")
    reqs.add_argument("--mean-duration", type=float, default=4.0)
    reqs.add_argument("--seed", type=int, default=0)
    reqs.add_argument("--out")
    reqs.set_defaults(handler=cmd_gen_requests)

    embed = subparsers.add_parser("embed", help="Embed request(s) into a substrate")
    embed.add_argument("--substrate", required=True)
    embed.add_argument("--request", required=True)
    embed.add_argument("--algorithm", default="alg6", choices=[f"alg{i}" for i in range(1, 7)])
    embed.add_argument("--k-search", "-k", type=int, default=8)
    embed.add_argument("--alpha", type=float, default=10.0)
    _add_checker_flags(embed, "simulation")
    embed.set_defaults(handler=cmd_embed)

    check = subparsers.add_parser("check", help="Run a feasibility check on a substrate + loads file")
    check.add_argument("--input", required=True)
    _add_checker_flags(check, "sufficient")
    check.set_defaults(handler=cmd_check)

    simulate = subparsers.add_parser("simulate", help="Run an online experiment")
    simulate.add_argument("--config")
    simulate.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    simulate.add_argument("--workers", type=int, default=None)
    simulate.add_argument("--out")
    simulate.set_defaults(handler=cmd_simulate)

    sweep = subparsers.add_parser("sweep", help="Run a parameter sweep preset")
    sweep.add_argument("--preset", required=True)
    sweep.add_argument("--config")
    sweep.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--timing", action="store_true", help="add the embed_time_ms column")
    sweep.add_argument("--out")
    sweep.set_defaults(handler=cmd_sweep)

    plot = subparsers.add_parser("plot-data", help="Aggregate a sweep CSV into plot series")
    plot.add_argument("--input", required=True)
    plot.add_argument("--preset")
    plot.add_argument("--x")
    plot.add_argument("--series")
    plot.add_argument("--metric", default="avg_revenue")
    plot.add_argument("--out")
    plot.set_defaults(handler=cmd_plot_data)

    presets = subparsers.add_parser("presets", help="List sweep presets")
    presets.set_defaults(handler=cmd_presets)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    level = (args.log_level or os.getenv("WEM_LOG_LEVEL", "WARNING")).upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if not args.command:
        parser.print_help()
        return EXIT_OK

    if hasattr(args, "workers") and args.workers is None and os.getenv("WEM_MAX_WORKERS"):
        args.workers = int(os.getenv("WEM_MAX_WORKERS"))

    try:
        return args.handler(args)
    except (ValueError, KeyError, OSError, RuntimeError) as e:
        _logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
