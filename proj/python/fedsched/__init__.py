"""Discrete-event simulator of federated container clusters."""

import json
import os

from ._fedsched import (
    Config,
    ConfigError,
    Error,
    InvariantViolation,
    Simulator as _Simulator,
    format_duration,
    least_allocated,
    load_config,
    parse_duration,
)
from . import _fedsched

__all__ = [
    "Config",
    "ConfigError",
    "Error",
    "InvariantViolation",
    "Simulator",
    "config_from_dict",
    "config_from_text",
    "format_duration",
    "least_allocated",
    "load_config",
    "metrics_from_jsonl",
    "parse_duration",
    "run",
]


def config_from_text(text, origin="<string>"):
    return _fedsched._config_from_text(text, origin)


def config_from_dict(data, base_dir="."):
    """Build a config from a dict; relative trace files resolve against base_dir."""
    return _fedsched._config_from_text_in(json.dumps(data), os.fspath(base_dir))


class Simulator(_Simulator):
    def pod(self, pod_id):
        return json.loads(self._pod(pod_id))

    def summary(self):
        return json.loads(self._summary())

    def events(self):
        return [json.loads(line) for line in self.events_jsonl().splitlines()]


def run(config, seed=None, out=None):
    """Run to completion. `config` is a Config, a path or a dict."""
    if isinstance(config, dict):
        config = config_from_dict(config)
    elif not isinstance(config, Config):
        config = load_config(config)
    sim = Simulator(config, config.seed if seed is None else seed)
    sim.run()
    if out is not None:
        sim.write_outputs(os.fspath(out))
    return sim


def metrics_from_jsonl(text):
    return json.loads(_fedsched._metrics_from_jsonl(text))
