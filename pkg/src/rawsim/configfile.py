"""Flat key = value config files.

One assignment per line, '#' starts a comment, blank lines ignored. Keys
are SimConfig field names; every key can also be overridden on the CLI
with --set key=value.
"""

from .engine import SimConfig
from .errors import InvalidConfigError


def parse_config_text(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(
                f"config line {lineno}: expected 'key = value', got {raw!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise InvalidConfigError(f"config line {lineno}: empty key")
        if key in values:
            raise InvalidConfigError(f"config line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path, overrides=None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config {path}: {exc}") from exc
    values = parse_config_text(text)
    if overrides:
        values.update(overrides)
    return SimConfig.from_mapping(values)


def config_text(config):
    """Inverse of parse_config_text for SimConfig round-trips."""
    lines = []
    for key, value in config.to_dict().items():
        if value is None:
            value = "none"
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
