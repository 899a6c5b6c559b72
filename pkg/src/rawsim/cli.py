"""Command-line driver.

Subcommands: gen (placement files), run (single simulation), sweep
(one-parameter sweep), figures (the full experiment suite), report
(aggregate run summaries). Exit status 0 on success, 2 on any
configuration problem.
"""

import argparse
import json
import pathlib
import sys

import numpy as np

from . import topology
from .configfile import load_config
from .engine import SimConfig, fmt, rng_stream, run
from .errors import InvalidConfigError, PlacementParseError, SetupError
from .experiments import ExperimentSpec, all_figures, run_sweep


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rawsim",
        description="Random-walk data-dissemination simulator for "
        "duty-cycled sensor networks with a mobile sink.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="base RNG seed")
        p.add_argument("--out", default=".", help="output file or directory")
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )

    p_gen = sub.add_parser("gen", help="generate a placement file")
    common(p_gen)
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--width", type=float, default=None)
    p_gen.add_argument("--height", type=float, default=None)

    p_run = sub.add_parser("run", help="run one simulation")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter")
    common(p_sweep)
    p_sweep.add_argument("--param", required=True, help="config key or 'delta'")
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated swept values"
    )
    p_sweep.add_argument("--name", default=None, help="dataset name")
    p_sweep.add_argument("--runs", type=int, default=None)

    p_fig = sub.add_parser("figures", help="emit every experiment CSV")
    common(p_fig)
    p_fig.add_argument("--runs", type=int, default=15)

    p_rep = sub.add_parser("report", help="aggregate run summary JSONs")
    common(p_rep)
    p_rep.add_argument("inputs", nargs="+", help="summary.json files")

    return parser


def _load_base_config(args):
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise InvalidConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.config:
        config = load_config(args.config, overrides)
    else:
        mapping = dict(overrides)
        config = SimConfig.from_mapping(mapping)
    if args.seed is not None:
        config = config.with_updates(seed=args.seed)
    return config


def cmd_gen(args):
    config = _load_base_config(args)
    n = args.n if args.n is not None else config.n
    width = args.width if args.width is not None else config.width
    height = args.height if args.height is not None else config.height
    positions = topology.place_uniform(
        n, width, height, rng_stream(config.seed, "placement")
    )
    out = pathlib.Path(args.out)
    if out.is_dir():
        out = out / f"placement_n{n}.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(topology.save_placement(positions))
    print(out)
    return 0


def cmd_run(args):
    config = _load_base_config(args)
    trace = run(config)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.csv").write_text(trace.samples_csv())
    (out / "sink.csv").write_text(trace.sink_csv())
    (out / "summary.json").write_text(trace.summary_json())
    print(out / "summary.json")
    return 0


def cmd_sweep(args):
    config = _load_base_config(args)
    values = tuple(v.strip() for v in args.values.split(",") if v.strip())
    if not values:
        raise InvalidConfigError("--values is empty")
    name = args.name or f"sweep_{args.param.replace('/', '_')}"
    spec = ExperimentSpec(name=name, base=config, param=args.param, values=values)
    dataset = run_sweep(spec, runs=args.runs)
    out = pathlib.Path(args.out)
    if out.is_dir():
        out = out / f"{name}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dataset.to_csv())
    print(out)
    return 0


def cmd_figures(args):
    seed = args.seed if args.seed is not None else 42
    written = all_figures(seed=seed, out_dir=args.out, runs=args.runs)
    for path in written:
        print(path)
    return 0


def cmd_report(args):
    rows = {}
    for path in args.inputs:
        try:
            payload = json.loads(pathlib.Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfigError(f"cannot read summary {path}: {exc}") from exc
        for name, value in payload.get("metrics", {}).items():
            rows.setdefault(name, []).append(float(value))
    lines = ["metric,mean,stddev,count"]
    for name in sorted(rows):
        vals = np.asarray(rows[name])
        lines.append(f"{name},{fmt(vals.mean())},{fmt(vals.std())},{len(vals)}")
    text = "\n".join(lines) + "\n"
    out = pathlib.Path(args.out)
    if out.is_dir():
        out = out / "report.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(out)
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "figures": cmd_figures,
    "report": cmd_report,
}


def cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (InvalidConfigError, PlacementParseError, SetupError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
