"""Node-side dissemination protocol: random-walk advertisement, hello-based
neighbor discovery, and view management at storage motes.

A node advertises itself by launching a random walk carrying its current
reading. Every walk step consumes one ttl unit whether the walk moves or
stalls, so a walk of budget d performs exactly d steps; the node holding
the message when ttl hits zero becomes the storage mote and records a
<origin, reading, time> descriptor in its view.
"""

import math
from dataclasses import dataclass, field

from .dutycycle import NodeState
from .errors import InvalidConfigError


@dataclass(frozen=True)
class SizeBased:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidConfigError(f"view size bound must be >= 1, got {self.k}")


@dataclass(frozen=True)
class TimeoutBased:
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise InvalidConfigError(f"view timeout must be > 0, got {self.tau}")


def parse_view_policy(text, n=None):
    """Parse "size:K" or "timeout:TAU"; "size:sqrt" means ceil(sqrt(n))."""
    kind, _, value = text.partition(":")
    kind = kind.strip().lower()
    value = value.strip()
    if kind == "size":
        if value == "sqrt":
            if n is None:
                raise InvalidConfigError("size:sqrt needs the node count")
            return SizeBased(math.ceil(math.sqrt(n)))
        return SizeBased(int(value))
    if kind == "timeout":
        return TimeoutBased(float(value))
    raise InvalidConfigError(f"unknown view policy {text!r}")


@dataclass
class ViewEntry:
    origin: int
    data_value: int
    last_time: float


class View:
    """Origin-keyed descriptor collection owned by one storage mote."""

    def __init__(self, owner, policy):
        self.owner = owner
        self.policy = policy
        self.entries = {}

    def __len__(self):
        return len(self.entries)

    def origins(self):
        return self.entries.keys()

    def publish(self, entry, now):
        """Insert or refresh, then apply the policy (Alg. publishView)."""
        self.entries[entry.origin] = ViewEntry(entry.origin, entry.data_value, now)
        self.maintain(now)

    def maintain(self, now):
        policy = self.policy
        if isinstance(policy, SizeBased):
            while len(self.entries) > policy.k:
                # oldest first; ties evict the smaller origin id
                victim = min(self.entries.values(), key=lambda e: (e.last_time, e.origin))
                del self.entries[victim.origin]
        else:
            expired = [o for o, e in self.entries.items() if now - e.last_time > policy.tau]
            for origin in expired:
                del self.entries[origin]


@dataclass
class NeighborTable:
    """Neighbors discovered through hello packets while the owner was awake."""

    owner: int
    known: list = field(default_factory=list)   # discovery order, for uniform picks
    last_heard: dict = field(default_factory=dict)

    def hear(self, sender, now):
        if sender not in self.last_heard:
            self.known.append(sender)
        self.last_heard[sender] = now


@dataclass
class RWMessage:
    origin: int
    ttl: int
    launch_time: float
    data_value: int
    current: int


def launch_rw(origin, now, hop_budget, data_value, state):
    """Start a walk at an active node; returns None if the origin is not
    awake (the launch is skipped, not an error)."""
    if state is not NodeState.ACTIVE:
        return None
    return RWMessage(
        origin=origin,
        ttl=hop_budget,
        launch_time=now,
        data_value=data_value,
        current=origin,
    )


def pick_next(node, known, state_of, pick):
    """Alg. PickNextNode: a uniformly chosen discovered neighbor if it is
    awake, otherwise the node itself (stall).

    known is the node's discovered-neighbor list (NeighborTable.known);
    state_of maps a node id to its NodeState; pick is a uniform [0, 1) draw.
    """
    if not known:
        return node
    candidate = known[int(pick * len(known))]
    if state_of(candidate) is NodeState.ACTIVE:
        return candidate
    return node


def hop(msg, known, state_of, pick):
    """One ttl-consuming step of the walk held at msg.current.

    Returns True when the walk terminated (msg.current is the storage mote).
    """
    msg.ttl -= 1
    nxt = pick_next(msg.current, known, state_of, pick)
    msg.current = nxt
    return msg.ttl <= 0


def hello_tick(node, now, neighbors, state_of, tables):
    """One hello broadcast: an awake node is recorded by every awake
    topological neighbor. Returns the tables that changed."""
    if state_of(node) is not NodeState.ACTIVE:
        return []
    updated = []
    for u in neighbors:
        if state_of(u) is NodeState.ACTIVE:
            tables[u].hear(node, now)
            updated.append(tables[u])
    return updated


def resolve_rw_length(spec, n):
    """Hop budget from "n", "n/2", "n/4", or an explicit integer."""
    if isinstance(spec, int):
        value = spec
    else:
        text = str(spec).strip().lower().replace(" ", "")
        named = {"n": n, "n/2": n // 2, "n/4": n // 4}
        if text in named:
            value = named[text]
        else:
            try:
                value = int(text)
            except ValueError:
                raise InvalidConfigError(f"bad rw_length {spec!r}") from None
    if value < 0:
        raise InvalidConfigError(f"rw_length must be >= 0, got {value}")
    return value


def expected_intersection(n, k):
    """Mean pairwise overlap of ideal uniform views of size k: k*k/n."""
    return k * k / n


def mean_ideal_intersection(n, k, pairs, rng):
    """Sampling oracle: draw view pairs uniformly without replacement and
    average their overlap."""
    total = 0
    for _ in range(pairs):
        a = rng.choice(n, size=k, replace=False)
        b = rng.choice(n, size=k, replace=False)
        total += len(set(a.tolist()) & set(b.tolist()))
    return total / pairs
