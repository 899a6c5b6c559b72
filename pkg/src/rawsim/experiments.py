"""Named experiment sweeps emitting plot-ready CSV datasets.

Each experiment replays one of the study's scenarios: active-node count
as a function of the sleep fraction, the sleep fraction needed to keep
sqrt(n) nodes awake, and sink-coverage curves under four duty-cycle
variants (normal timeouts, small timeouts, all nodes active, and a dense
small grid).
"""

import math
from dataclasses import dataclass

import numpy as np

from .engine import SimConfig, build_topology, fmt, replicate
from .errors import InvalidConfigError
from .sink import predicted_coverage
from .topology import save_placement

DELTA_GRID = tuple(round(0.1 * i, 1) for i in range(10))  # 0.0 .. 0.9

# Radio range frozen from a pre-build sweep: mean degree ~44 for n=100
# placed uniformly on a 550x550 grid (closed-disk connectivity).
DENSE_RADIO_RANGE = 260.0

COVERAGE_VARIANTS = ("normal", "small-timeout", "all-active", "dense")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    base: SimConfig
    param: str
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise InvalidConfigError("sweep value list is empty")
        # fails fast on unknown parameter names
        apply_param(self.base, self.param, self.values[0])


@dataclass(frozen=True)
class FigureDataset:
    name: str
    columns: tuple
    rows: tuple

    def to_csv(self):
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def column(self, name):
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _cell(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def apply_param(config, name, value):
    """Set one swept parameter; "delta" adjusts t_active/t_sleep at fixed U."""
    if name == "delta":
        period = config.duty_config().period
        frac = float(value)
        if not 0.0 <= frac < 1.0:
            raise InvalidConfigError(f"delta must be in [0, 1), got {frac}")
        return config.with_updates(
            t_active_s=(1.0 - frac) * period, t_sleep_s=frac * period
        )
    coerced = SimConfig.coerce_value(name, value)
    return config.with_updates(**{name: coerced})


def active_sweep_config(n, period=10.0, horizon=500.0, seed=0, runs=15):
    """Active/sleep analysis runs with dissemination and the sink disabled."""
    return SimConfig(
        n=n,
        t_active_s=period,
        t_sleep_s=0.0,
        timeout_max_s=period,
        horizon_s=horizon,
        dissemination_enabled=False,
        sink_enabled=False,
        seed=seed,
        replications=runs,
    )


def exp_active_vs_delta(n, deltas=DELTA_GRID, runs=15, seed=0):
    """Mean sampled active-node count per sleep fraction."""
    base = active_sweep_config(n, seed=seed, runs=runs)
    rows = []
    for frac in deltas:
        result = replicate(apply_param(base, "delta", frac), runs, keep_traces=False)
        mean, std = result.metric("time_avg_active")
        rows.append((float(frac), mean, std, n, runs))
    return FigureDataset(
        name=f"active_vs_delta_n{n}",
        columns=("delta", "mean_active", "stddev_active", "n", "runs"),
        rows=tuple(rows),
    )


def exp_delta_for_sqrt_n(ns, deltas=DELTA_GRID, runs=15, seed=0):
    """Largest grid sleep fraction keeping at least sqrt(n) nodes awake."""
    rows = []
    for n in ns:
        if n < 4:
            raise InvalidConfigError(f"network size must be >= 4, got {n}")
        dataset = exp_active_vs_delta(n, deltas, runs, seed)
        threshold = math.sqrt(n)
        best = None
        best_mean = None
        for frac, mean, _std, _n, _runs in dataset.rows:
            if mean >= threshold and (best is None or frac > best):
                best = frac
                best_mean = mean
        if best is None:
            raise InvalidConfigError(
                f"no grid point keeps sqrt({n}) nodes active"
            )
        rows.append((n, best, best_mean, threshold, runs))
    return FigureDataset(
        name="delta_for_sqrt_n",
        columns=("n", "delta", "mean_active", "sqrt_n", "runs"),
        rows=tuple(rows),
    )


def coverage_config(variant, seed=0, runs=15):
    """The coverage scenarios: n=100, walk length n/2, view size sqrt(n),
    horizon 1000 s, ten sink visits spaced one period apart."""
    base = SimConfig(
        n=100,
        rw_length="n/2",
        view_policy="size:sqrt",
        horizon_s=1000.0,
        sink_visits=10,
        sink_gap_s=10.0,
        sink_start_s=200.0,
        seed=seed,
        replications=runs,
    )
    if variant == "normal":
        return base  # timeouts uniform over [0, U]
    if variant == "small-timeout":
        return base.with_updates(timeout_min_s=1.0, timeout_max_s=2.0)
    if variant == "all-active":
        return base.with_updates(t_active_s=10.0, t_sleep_s=0.0, timeout_max_s=0.0)
    if variant == "dense":
        return base.with_updates(
            width=550.0,
            height=550.0,
            radio_range=DENSE_RADIO_RANGE,
            timeout_min_s=1.0,
            timeout_max_s=2.0,
        )
    raise InvalidConfigError(f"unknown coverage variant {variant!r}")


def exp_coverage(variant, runs=15, seed=0):
    """Coverage curve (mean and stddev per visit index) for one variant."""
    config = coverage_config(variant, seed=seed, runs=runs)
    result = replicate(config, runs, keep_traces=False)
    mean = result.coverage_mean()
    std = result.coverage_std()
    n = config.n
    rows = []
    for i in range(mean.shape[0]):
        rows.append(
            (
                i + 1,
                mean[i],
                std[i],
                mean[i] * n,
                predicted_coverage(i + 1, n) / n,
                n,
                runs,
            )
        )
    return FigureDataset(
        name=f"coverage_{variant.replace('-', '_')}",
        columns=(
            "visit_index",
            "mean_coverage",
            "stddev_coverage",
            "mean_collected",
            "predicted_coverage",
            "n",
            "runs",
        ),
        rows=tuple(rows),
    )


def run_sweep(spec, runs=None):
    """Generic one-parameter sweep aggregating every scalar metric."""
    if runs is None:
        runs = spec.base.replications
    rows = []
    names = None
    for value in spec.values:
        result = replicate(apply_param(spec.base, spec.param, value), runs)
        if names is None:
            names = sorted(result.metrics)
        row = [value]
        for name in names:
            mean, std = result.metrics[name]
            row.extend((mean, std))
        row.append(runs)
        rows.append(tuple(row))
    columns = [spec.param]
    for name in names:
        columns.extend((f"{name}_mean", f"{name}_stddev"))
    columns.append("runs")
    return FigureDataset(name=spec.name, columns=tuple(columns), rows=tuple(rows))


def all_figures(seed=42, out_dir=".", runs=15):
    """Emit one CSV per figure analogue; returns the written paths."""
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, text):
        path = out / f"{name}.csv"
        path.write_text(text)
        written.append(path)

    emit("active_vs_delta_n100", exp_active_vs_delta(100, runs=runs, seed=seed).to_csv())
    emit("active_vs_delta_n400", exp_active_vs_delta(400, runs=runs, seed=seed).to_csv())
    emit(
        "delta_for_sqrt_n",
        exp_delta_for_sqrt_n((25, 100, 200, 300, 400), runs=runs, seed=seed).to_csv(),
    )
    for variant in COVERAGE_VARIANTS:
        dataset = exp_coverage(variant, runs=runs, seed=seed)
        emit(dataset.name, dataset.to_csv())

    # deployment snapshots matching the two grids
    normal = build_topology(coverage_config("normal", seed=seed))
    dense = build_topology(coverage_config("dense", seed=seed))
    for name, top in (("placement_1000x1000", normal), ("placement_550x550", dense)):
        path = out / f"{name}.txt"
        path.write_text(save_placement(top.positions))
        written.append(path)
    return written
