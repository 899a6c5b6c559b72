"""rawsim: discrete-event simulator of random-walk data dissemination for
duty-cycled wireless sensor networks with a mobile data-collecting sink."""

from .engine import ReplicateResult, RunTrace, SimConfig, replicate, rng_stream, run

__all__ = [
    "ReplicateResult",
    "RunTrace",
    "SimConfig",
    "replicate",
    "rng_stream",
    "run",
]

__version__ = "0.1.0"
