"""Deterministic discrete-event core.

One engine instance is strictly single-threaded; replications are
independent executions with consecutive seeds. All randomness comes from
named Philox streams keyed by (seed, label), so e.g. changing the number
of sink visits never perturbs placement or walk draws. Events dispatch in
(time, sequence) order; the sequence counter is assigned at scheduling
time, which makes equal-time dispatch order the scheduling order.
"""

import dataclasses
import heapq
import json
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import dissemination, dutycycle, sink, topology as topo
from .dissemination import RWMessage, View, ViewEntry, parse_view_policy, resolve_rw_length
from .errors import InvalidConfigError, SetupError

EV_HELLO = 0
EV_LAUNCH = 1
EV_HOP = 2
EV_VISIT = 3

STREAM_LABELS = ("placement", "phases", "walks", "sink")


def rng_stream(seed, label):
    """Independent Philox stream for one purpose within one run."""
    entropy = int(seed) & 0xFFFFFFFFFFFFFFFF
    key = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence(entropy=entropy, spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class SimConfig:
    n: int = 100
    width: float = 1000.0
    height: float = 1000.0
    radio_range: float = topo.DEFAULT_RADIO_RANGE
    placement_file: str = None
    t_active_s: float = 1.0
    t_sleep_s: float = 9.0
    timeout_min_s: float = 0.0
    timeout_max_s: float = None        # None -> period U
    rw_length: str = "n/2"
    view_policy: str = "size:sqrt"     # size:K | size:sqrt | timeout:TAU
    hello_interval_s: float = 1.0
    hop_latency_s: float = 0.01
    advertise_period_s: float = None   # None -> period U
    dissemination_enabled: bool = True
    sink_enabled: bool = True
    sink_visits: int = None            # None -> ceil(sqrt(n))
    sink_gap_s: float = 10.0
    sink_start_s: float = 200.0
    sink_wake_sleeping: bool = True
    horizon_s: float = 500.0
    seed: int = 0
    replications: int = 15
    fixed_topology: bool = False
    require_connected: bool = False

    def __post_init__(self):
        if self.horizon_s < 0:
            raise InvalidConfigError(f"horizon must be >= 0, got {self.horizon_s}")
        if self.replications < 1:
            raise InvalidConfigError(
                f"replications must be >= 1, got {self.replications}"
            )
        if self.hop_latency_s <= 0 or self.hello_interval_s <= 0:
            raise InvalidConfigError("hop latency and hello interval must be > 0")
        # validate eagerly so bad configs fail before a run starts
        self.duty_config()
        self.resolved_rw_length()
        self.resolved_view_policy()
        if self.sink_enabled and self.resolved_sink_visits() < 1:
            raise InvalidConfigError("sink_visits must be >= 1")
        if self.sink_gap_s < 0 or self.sink_start_s < 0:
            raise InvalidConfigError("sink timing must be >= 0")

    def duty_config(self):
        return dutycycle.DutyCycleConfig(
            t_active=self.t_active_s,
            t_sleep=self.t_sleep_s,
            timeout_min=self.timeout_min_s,
            timeout_max=self.timeout_max_s,
        )

    def resolved_rw_length(self):
        return resolve_rw_length(self.rw_length, self.n)

    def resolved_view_policy(self):
        return parse_view_policy(self.view_policy, self.n)

    def resolved_sink_visits(self):
        if self.sink_visits is None:
            return math.ceil(math.sqrt(self.n))
        return int(self.sink_visits)

    def resolved_advertise_period(self):
        if self.advertise_period_s is None:
            return self.duty_config().period
        return float(self.advertise_period_s)

    def with_updates(self, **kwargs):
        return dataclasses.replace(self, **kwargs)

    def to_dict(self):
        return dataclasses.asdict(self)

    _BOOL_KEYS = frozenset(
        {
            "dissemination_enabled",
            "sink_enabled",
            "sink_wake_sleeping",
            "fixed_topology",
            "require_connected",
        }
    )
    _INT_KEYS = frozenset({"n", "seed", "replications", "sink_visits"})
    _STR_KEYS = frozenset({"rw_length", "view_policy", "placement_file"})
    _OPTIONAL_KEYS = frozenset(
        {"timeout_max_s", "advertise_period_s", "sink_visits", "placement_file"}
    )

    @classmethod
    def coerce_value(cls, key, value):
        names = {f.name for f in dataclasses.fields(cls)}
        if key not in names:
            raise InvalidConfigError(f"unknown config key {key!r}")
        if isinstance(value, str):
            text = value.strip()
            if key in cls._OPTIONAL_KEYS and text.lower() in ("", "none", "auto"):
                return None
            if key in cls._BOOL_KEYS:
                if text.lower() in ("true", "1", "yes", "on"):
                    return True
                if text.lower() in ("false", "0", "no", "off"):
                    return False
                raise InvalidConfigError(f"bad boolean for {key}: {value!r}")
            if key in cls._INT_KEYS:
                return int(text)
            if key in cls._STR_KEYS:
                return text
            return float(text)
        return value

    @classmethod
    def from_mapping(cls, mapping):
        kwargs = {k: cls.coerce_value(k, v) for k, v in mapping.items()}
        return cls(**kwargs)


@dataclass
class RunTrace:
    config: SimConfig
    seed: int
    times: np.ndarray
    active_counts: np.ndarray
    view_sizes: np.ndarray            # (samples, n)
    sink_report: "sink.SinkReport"
    event_counts: dict
    launches: int
    depositions: int
    launch_skips: int
    dropped_in_flight: int
    phases: np.ndarray = field(repr=False, default=None)

    def time_avg_active(self, after=None):
        """Mean sampled active count once all initial timers have expired."""
        if after is None:
            after = self.config.duty_config().timeout_max
        mask = self.times >= after
        if not mask.any():
            mask = self.times >= self.times.max()
        return float(self.active_counts[mask].mean())

    def mean_view_sizes(self):
        return self.view_sizes.mean(axis=1)

    def coverage_curve(self):
        return sink.coverage_curve(self.sink_report) if self.sink_report else []

    def summary(self):
        metrics = {
            "time_avg_active": self.time_avg_active(),
            "launches": self.launches,
            "depositions": self.depositions,
            "launch_skips": self.launch_skips,
            "dropped_in_flight": self.dropped_in_flight,
            "final_mean_view_size": float(self.view_sizes[-1].mean()),
        }
        if self.sink_report is not None:
            metrics["coverage"] = self.sink_report.coverage
            metrics["visits"] = len(self.sink_report.visits)
        return metrics

    def samples_csv(self):
        lines = ["time_s,active_count,mean_view_size"]
        means = self.mean_view_sizes()
        for t, a, v in zip(self.times, self.active_counts, means):
            lines.append(f"{fmt(t)},{int(a)},{fmt(v)}")
        return "\n".join(lines) + "\n"

    def sink_csv(self):
        header = (
            "visit_index,node_id,time_s,entries_collected,"
            "new_origins,cumulative_origins,coverage"
        )
        lines = [header]
        if self.sink_report is not None:
            n = self.sink_report.n
            for v in self.sink_report.visits:
                lines.append(
                    f"{v.index},{v.node},{fmt(v.time)},{v.entries_collected},"
                    f"{v.new_origins},{v.cumulative_origins},{fmt(v.cumulative_origins / n)}"
                )
        return "\n".join(lines) + "\n"

    def summary_json(self):
        payload = {
            "config": self.config.to_dict(),
            "seed": self.seed,
            "metrics": self.summary(),
            "event_counts": self.event_counts,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def fmt(x):
    """CSV float format: 6 significant digits."""
    return f"{float(x):.6g}"


def build_topology(config, placement_seed=None):
    seed = config.seed if placement_seed is None else placement_seed
    if config.placement_file:
        with open(config.placement_file) as fh:
            positions = topo.load_placement(fh.read())
    else:
        rng = rng_stream(seed, "placement")
        positions = topo.place_uniform(config.n, config.width, config.height, rng)
    return topo.build_adjacency(
        positions, config.radio_range, config.width, config.height
    )


class _FloatStream:
    """Buffered uniform [0, 1) draws from one generator."""

    __slots__ = ("rng", "chunk", "buf", "i")

    def __init__(self, rng, chunk=65536):
        self.rng = rng
        self.chunk = chunk
        self.buf = rng.random(chunk)
        self.i = 0

    def next(self):
        i = self.i
        if i >= self.buf.shape[0]:
            self.buf = self.rng.random(self.chunk)
            i = 0
        self.i = i + 1
        return self.buf[i]


def run(config, topology=None):
    """Execute one simulation; identical (config, seed) gives an identical
    trace. A topology may be passed in to share placement across runs."""
    if topology is None:
        topology = build_topology(config)
    n = topology.n
    duty = config.duty_config()
    if config.require_connected and not topo.is_connected(topology):
        raise SetupError("topology is disconnected but require_connected is set")

    phases = dutycycle.draw_phases(n, duty, rng_stream(config.seed, "phases"))
    period = duty.period
    t_active = duty.t_active
    horizon = config.horizon_s

    adjacency = topology.neighbors
    policy = config.resolved_view_policy()
    views = [View(i, policy) for i in range(n)]
    tables = [dissemination.NeighborTable(i) for i in range(n)]
    known = [t.known for t in tables]      # aliases, mutated in the hot loop
    heard = [t.last_heard for t in tables]
    readings = [0] * n                 # monotone per-node sequence numbers
    size_log = []                      # (time, node, view size) deltas

    def is_active(node, t):
        dt = t - phases[node]
        return dt >= 0.0 and dt % period < t_active

    def state_of_at(t):
        return lambda node: (
            dutycycle.NodeState.ACTIVE
            if is_active(node, t)
            else dutycycle.NodeState.SLEEP
        )

    heap = []
    seq = 0

    def schedule(t, kind, payload):
        nonlocal seq
        heapq.heappush(heap, (t, seq, kind, payload))
        seq += 1

    rw_length = config.resolved_rw_length()
    hop_latency = config.hop_latency_s
    hello_interval = config.hello_interval_s
    advertise_period = config.resolved_advertise_period()

    if config.dissemination_enabled and horizon > 0:
        for node in range(n):
            if phases[node] <= horizon:
                schedule(phases[node], EV_HELLO, node)
        for node in range(n):
            if phases[node] <= horizon:
                schedule(phases[node], EV_LAUNCH, node)

    report = None
    plan = None
    if config.sink_enabled and horizon > 0:
        plan = sink.plan_random_visits(
            n,
            config.resolved_sink_visits(),
            config.sink_start_s,
            config.sink_gap_s,
            rng_stream(config.seed, "sink"),
        )
        report = sink.SinkReport(n=n)
        for idx, t in enumerate(plan.times):
            if t <= horizon:
                schedule(t, EV_VISIT, idx)

    walk_draws = _FloatStream(rng_stream(config.seed, "walks"))
    launches = 0
    depositions = 0
    launch_skips = 0
    in_flight = 0
    event_counts = {"hello": 0, "launch": 0, "hop": 0, "visit": 0}

    def deposit(storage, origin, value, t):
        nonlocal depositions
        view = views[storage]
        view.publish(ViewEntry(origin, value, t), t)
        depositions += 1
        size_log.append((t, storage, len(view)))

    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        t, s, kind, payload = pop(heap)
        if kind == EV_HOP:
            event_counts["hop"] += 1
            msg = payload
            done = dissemination.hop(
                msg, known[msg.current], state_of_at(t), walk_draws.next()
            )
            if done:
                in_flight -= 1
                deposit(msg.current, msg.origin, msg.data_value, t)
            else:
                nxt = t + hop_latency
                if nxt <= horizon:
                    push(heap, (nxt, seq, EV_HOP, msg))
                    seq += 1
                else:
                    in_flight -= 1  # dropped at horizon, counted below
        elif kind == EV_HELLO:
            event_counts["hello"] += 1
            node = payload
            if is_active(node, t):
                for u in adjacency[node]:
                    du = t - phases[u]
                    if du >= 0.0 and du % period < t_active:
                        h = heard[u]
                        if node not in h:
                            known[u].append(node)
                        h[node] = t
            nxt = t + hello_interval
            if nxt <= horizon:
                push(heap, (nxt, seq, EV_HELLO, node))
                seq += 1
        elif kind == EV_LAUNCH:
            event_counts["launch"] += 1
            node = payload
            if is_active(node, t):
                readings[node] += 1
                launches += 1
                if rw_length == 0:
                    deposit(node, node, readings[node], t)
                else:
                    msg = RWMessage(node, rw_length, t, readings[node], node)
                    nxt = t + hop_latency
                    if nxt <= horizon:
                        in_flight += 1
                        push(heap, (nxt, seq, EV_HOP, msg))
                        seq += 1
            else:
                launch_skips += 1
            nxt = t + advertise_period
            if nxt <= horizon:
                push(heap, (nxt, seq, EV_LAUNCH, node))
                seq += 1
        else:  # EV_VISIT
            event_counts["visit"] += 1
            node = plan.nodes[payload]
            if config.sink_wake_sleeping or is_active(node, t):
                view = views[node]
                view.maintain(t)
                size_log.append((t, node, len(view)))
                origins = sink.collect_origins(node, view)
            else:
                origins = set()
            report.record_visit(node, t, origins)

    times = np.arange(0.0, math.floor(horizon) + 1.0)
    active = dutycycle.active_counts(phases, duty, times)
    view_sizes = _view_size_series(size_log, times, n)
    dropped = launches - depositions

    return RunTrace(
        config=config,
        seed=config.seed,
        times=times,
        active_counts=active,
        view_sizes=view_sizes,
        sink_report=report,
        event_counts=event_counts,
        launches=launches,
        depositions=depositions,
        launch_skips=launch_skips,
        dropped_in_flight=dropped,
        phases=phases,
    )


def _view_size_series(size_log, times, n):
    """Per-node view sizes on the sample grid, replayed from change deltas."""
    out = np.zeros((times.shape[0], n), dtype=np.int32)
    current = np.zeros(n, dtype=np.int32)
    j = 0
    total = len(size_log)
    for k, t in enumerate(times):
        while j < total and size_log[j][0] <= t:
            _, node, size = size_log[j]
            current[node] = size
            j += 1
        out[k] = current
    return out


@dataclass
class ReplicateResult:
    config: SimConfig
    runs: int
    traces: list
    metrics: dict                     # name -> (mean, stddev)
    coverage_matrix: np.ndarray       # (runs, visits) or None

    def metric(self, name):
        return self.metrics[name]

    def coverage_mean(self):
        return self.coverage_matrix.mean(axis=0)

    def coverage_std(self):
        return self.coverage_matrix.std(axis=0)


def replicate(config, runs=None, keep_traces=True):
    """Independent executions with seeds seed, seed+1, ...; aggregates every
    scalar metric. With fixed_topology the placement of the base seed is
    shared; otherwise each run redraws its own."""
    if runs is None:
        runs = config.replications
    if runs < 1:
        raise InvalidConfigError(f"runs must be >= 1, got {runs}")

    shared = build_topology(config) if config.fixed_topology else None
    traces = []
    for i in range(runs):
        cfg = config.with_updates(seed=config.seed + i)
        traces.append(run(cfg, topology=shared))

    scalars = {}
    for trace in traces:
        for name, value in trace.summary().items():
            scalars.setdefault(name, []).append(float(value))
    metrics = {
        name: (float(np.mean(vals)), float(np.std(vals)))
        for name, vals in scalars.items()
    }

    coverage = None
    if traces[0].sink_report is not None:
        coverage = np.array([sink.coverage_fractions(t.sink_report) for t in traces])

    return ReplicateResult(
        config=config,
        runs=runs,
        traces=traces if keep_traces else [],
        metrics=metrics,
        coverage_matrix=coverage,
    )
