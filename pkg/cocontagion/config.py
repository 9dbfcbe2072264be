"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.

Run configuration: JSON config files, command line overrides and the
defaults for every scenario.

A config file looks like data/example_tau_grid.json. Every value missing from
the file falls back to a default, and the complete effective config is echoed
into manifest.json, which can be parsed back with config_from_manifest.
"""

import copy
import json
import numbers
import re
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Union

from cocontagion.dynamics import SimParams
from cocontagion.experiments import (LONG_RANGE_KINDS, SYNERGY_PAIRINGS, Pairing,
    pairing_from_name)
from cocontagion.graphgen import KINDS, GraphSpec

SCENARIOS = ("single_trial", "tau_grid", "beta_sweep", "synergy", "long_short",
    "speed_order", "branching")

TOP_LEVEL_KEYS = ("scenario", "layer_a", "layer_b", "params", "grids", "trials",
    "output_dir", "threads")

DEFAULT_NODES = 6400
DEFAULT_TRIALS = 50
DEFAULT_OUTPUT_DIR = "results"

# scenarios which estimate the depth density of every cell from its trials
BRANCH_SCENARIOS = ("branching", "long_short")

# dormancy axis used by the heatmaps, 0 to 0.2 in steps of 0.01
TAU_AXIS = [round(i * 0.01, 2) for i in range(21)]

DEFAULT_LAYERS = {
    "single_trial": ("LAT", "LAT"),
    "tau_grid": ("RRG", "ERG"),
    "beta_sweep": ("WSG", "WSG"),
    "synergy": ("ERG", "ERG"),
    "long_short": ("ERG", "LAT"),
    "speed_order": ("ERG", "ERG"),
    "branching": ("RRG", "ERG"),
}

# parameters which differ from the SimParams defaults, per scenario
DEFAULT_PARAMS = {
    "single_trial": {"alpha": 1.0},
    "tau_grid": {"alpha": 3.0},
    "beta_sweep": {"alpha": 1.0},
    "synergy": {"alpha": 3.0},
    "long_short": {"alpha": 0.5},
    "speed_order": {"alpha": 3.0},
    "branching": {"alpha": 3.0, "tau_a": 0.14, "tau_b": 0.02},
}

DEFAULT_GRIDS = {
    "single_trial": {},
    "tau_grid": {"tau_a": TAU_AXIS, "tau_b": TAU_AXIS, "raw_cells": False, "series": False},
    "beta_sweep": {"beta_a": [0.001],
        "beta_b": [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2],
        "tau_b": TAU_AXIS, "raw_cells": False, "series": False},
    "synergy": {"alpha": [0.5, 1.0, 2.0, 3.0, 5.0], "pairings": list(SYNERGY_PAIRINGS),
        "raw_cells": False, "series": False},
    "long_short": {"tau_a": TAU_AXIS, "tau_b": TAU_AXIS, "lower": 0.2, "upper": 0.8,
        "raw_cells": False, "series": False},
    "speed_order": {"kinds": ["RRG", "ERG", "PLG"], "threshold": 0.5},
    "branching": {"sizes": [400, 1600, 6400], "lower": 0.2, "upper": 0.8,
        "contagion": "b", "series": False},
}

class ConfigError(ValueError):
    """ raised for a config value which is missing, unknown or out of range
    """

def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)

def _is_integer(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)

def _number_list(low, high, low_open=False):
    def check(values):
        if not isinstance(values, list) or not values:
            return "must be a non-empty list of numbers"
        for value in values:
            if not _is_number(value):
                return "must be a non-empty list of numbers"
            if value > high or value < low or (low_open and value == low):
                return "values must lie in {0}{1},{2}]".format("(" if low_open else "[", low, high)
        return None
    return check

def _choice_list(choices):
    def check(values):
        if not isinstance(values, list) or not values:
            return "must be a non-empty list"
        unknown = [x for x in values if x not in choices]
        if unknown:
            return "values must be among {0}, not {1}".format(", ".join(choices),
                ", ".join(str(x) for x in unknown))
        return None
    return check

def _fraction(value):
    if not _is_number(value) or not 0 < value < 1:
        return "must lie strictly between 0 and 1"
    return None

def _boolean(value):
    return None if isinstance(value, bool) else "must be true or false"

def _sizes(values):
    if not isinstance(values, list) or not values:
        return "must be a non-empty list of node counts"
    if not all(_is_integer(x) and x > 1 for x in values):
        return "node counts must be integers above 1"
    return None

GRID_CHECKS = {
    "tau_a": _number_list(0, 1),
    "tau_b": _number_list(0, 1),
    "beta_a": _number_list(0, 1),
    "beta_b": _number_list(0, 1, low_open=True),
    "alpha": _number_list(0, float("inf"), low_open=True),
    "pairings": _choice_list(SYNERGY_PAIRINGS),
    "kinds": _choice_list(KINDS),
    "threshold": _fraction,
    "sizes": _sizes,
    "lower": _fraction,
    "upper": _fraction,
    "contagion": lambda x: None if x in ("a", "b") else "must be 'a' or 'b'",
    "raw_cells": _boolean,
    "series": _boolean,
}

@dataclass(frozen=True)
class RunConfig:
    """ a fully validated run: scenario, both layer specs, dynamics parameters,
    scenario grids, trials per cell, output folder and worker count
    """
    scenario: str
    layer_a: GraphSpec
    layer_b: GraphSpec
    params: SimParams
    grids: Dict[str, Any] = field(default_factory=dict)
    trials: int = DEFAULT_TRIALS
    output_dir: str = DEFAULT_OUTPUT_DIR
    threads: Union[int, str] = 1

    def to_dict(self, include_threads=True):
        data = {
            "scenario": self.scenario,
            "layer_a": self.layer_a.to_dict(),
            "layer_b": self.layer_b.to_dict(),
            "params": {x.name: getattr(self.params, x.name) for x in fields(SimParams)},
            "grids": copy.deepcopy(self.grids),
            "trials": self.trials,
            "output_dir": self.output_dir,
        }
        if include_threads:
            data["threads"] = self.threads
        return data

class _Source(object):
    """ tracks where config values came from, to point errors at them
    """

    def __init__(self, name, text=None):
        self.name = name
        self.lines = text.splitlines() if text is not None else []
        self.overridden = set()

    def line_of(self, key):
        """ line number of a dotted key in the config file, or None
        """

        start, found = 0, None
        for part in key.split("."):
            pattern = re.compile(r'"{0}"\s*:'.format(re.escape(part)))
            for index in range(start, len(self.lines)):
                if pattern.search(self.lines[index]):
                    start, found = index, index + 1
                    break
            else:
                return None
        return found

    def error(self, key, constraint):
        if key in self.overridden or not self.lines:
            location = "command line" if key in self.overridden else self.name
        else:
            line = self.line_of(key)
            location = self.name if line is None else "{0}:{1}".format(self.name, line)
        return ConfigError("{0}: {1}: {2}".format(location, key, constraint))

def _parse_value(text):
    try:
        return json.loads(text)
    except ValueError:
        return text

def _apply_override(data, key, value, source):
    parts = key.split(".")
    target = data
    for part in parts[:-1]:
        target = target.setdefault(part, {})
        if not isinstance(target, dict):
            raise source.error(key, "{0} is not a mapping".format(part))
    target[parts[-1]] = value
    source.overridden.add(key)

def _check_keys(mapping, allowed, prefix, source):
    if not isinstance(mapping, dict):
        raise source.error(prefix.rstrip("."), "must be a mapping")
    for key in mapping:
        if key not in allowed:
            raise source.error(prefix + key, "unknown key")

def _build_layer(name, data, scenario, source):
    values = dict(data.get(name, {}))
    values.setdefault("kind", DEFAULT_LAYERS[scenario][0 if name == "layer_a" else 1])
    values.setdefault("n", DEFAULT_NODES)
    try:
        return GraphSpec(**values)
    except ValueError as error:
        key = str(error).split()[0]
        raise source.error("{0}.{1}".format(name, key), str(error))
    except TypeError as error:
        raise source.error(name, str(error))

def _build_params(data, scenario, source):
    values = dict(DEFAULT_PARAMS[scenario])
    values.update(data.get("params", {}))
    try:
        return SimParams(**values)
    except ValueError as error:
        key = str(error).split()[0]
        raise source.error("params." + key, str(error))

def _build_grids(data, scenario, source):
    grids = copy.deepcopy(DEFAULT_GRIDS[scenario])
    grids.update(copy.deepcopy(data.get("grids", {})))
    for key, value in grids.items():
        problem = GRID_CHECKS[key](value)
        if problem is not None:
            raise source.error("grids." + key, problem)

    if scenario in ("branching", "long_short") and not grids["lower"] < grids["upper"]:
        raise source.error("grids.lower", "must be below grids.upper")

    return grids

def _check_scenario_layers(scenario, layer_a, layer_b, source):
    if layer_a.n != layer_b.n:
        raise source.error("layer_b.n", "must equal layer_a.n ({0})".format(layer_a.n))

    if scenario == "beta_sweep":
        for name, layer in (("layer_a", layer_a), ("layer_b", layer_b)):
            if layer.kind != "WSG":
                raise source.error(name + ".kind", "must be WSG for beta_sweep")
        if layer_a.k != layer_b.k:
            raise source.error("layer_b.k", "must equal layer_a.k for beta_sweep")
        for name, layer in (("layer_a", layer_a), ("layer_b", layer_b)):
            if layer.beta != GraphSpec.beta:
                raise source.error(name + ".beta", "is set by grids.beta_{0} for "
                    "beta_sweep, leave it out".format(name[-1]))
    elif scenario == "long_short":
        if layer_a.kind not in LONG_RANGE_KINDS:
            raise source.error("layer_a.kind", "must be one of {0} for long_short".format(
                ", ".join(LONG_RANGE_KINDS)))
        if layer_b.kind != "LAT":
            raise source.error("layer_b.kind", "must be LAT for long_short")
    elif scenario in ("synergy", "speed_order"):
        grid = "grids.pairings" if scenario == "synergy" else "grids.kinds"
        for index, (name, layer) in enumerate((("layer_a", layer_a), ("layer_b", layer_b))):
            if layer.kind != DEFAULT_LAYERS[scenario][index]:
                raise source.error(name + ".kind", "is set by {0} for {1}, leave it "
                    "out".format(grid, scenario))

def _check_grid_layers(scenario, grids, layer_a, layer_b, source):
    """ check the layers a scenario builds from its grids can be generated
    """

    keys = {"speed_order": "grids.kinds", "synergy": "grids.pairings",
        "branching": "grids.sizes"}
    try:
        if scenario == "speed_order":
            for kind in grids["kinds"]:
                layer_a.retyped(kind)
                layer_b.retyped(kind)
        elif scenario == "synergy":
            for name in grids["pairings"]:
                pairing_from_name(name, templates=Pairing(layer_a, layer_b))
        elif scenario == "branching":
            for n in grids["sizes"]:
                layer_a.resized(n)
                layer_b.resized(n)
    except ValueError as error:
        raise source.error(keys[scenario], str(error))

def _build(data, source):
    _check_keys(data, TOP_LEVEL_KEYS, "", source)

    scenario = data.get("scenario")
    if scenario is None:
        raise source.error("scenario", "required, one of {0}".format(", ".join(SCENARIOS)))
    if scenario not in SCENARIOS:
        raise source.error("scenario", "must be one of {0}, not {1!r}".format(
            ", ".join(SCENARIOS), scenario))

    graph_keys = [x.name for x in fields(GraphSpec)]
    _check_keys(data.get("layer_a", {}), graph_keys, "layer_a.", source)
    _check_keys(data.get("layer_b", {}), graph_keys, "layer_b.", source)
    _check_keys(data.get("params", {}), [x.name for x in fields(SimParams)], "params.", source)
    _check_keys(data.get("grids", {}), DEFAULT_GRIDS[scenario], "grids.", source)

    layer_a = _build_layer("layer_a", data, scenario, source)
    layer_b = _build_layer("layer_b", data, scenario, source)
    _check_scenario_layers(scenario, layer_a, layer_b, source)

    params = _build_params(data, scenario, source)
    grids = _build_grids(data, scenario, source)
    _check_grid_layers(scenario, grids, layer_a, layer_b, source)

    trials = data.get("trials", DEFAULT_TRIALS)
    if not _is_integer(trials) or trials < 1:
        raise source.error("trials", "must be an integer of at least 1")
    if scenario in BRANCH_SCENARIOS and trials < 2:
        raise source.error("trials", "must be at least 2 for branch statistics "
            "in {0}".format(scenario))

    output_dir = data.get("output_dir", DEFAULT_OUTPUT_DIR)
    if not isinstance(output_dir, str) or not output_dir:
        raise source.error("output_dir", "must be a folder path")

    threads = data.get("threads", 1)
    if threads != "auto" and (not _is_integer(threads) or threads < 1):
        raise source.error("threads", "must be a positive integer or 'auto'")

    return RunConfig(scenario, layer_a, layer_b, params, grids, trials, output_dir, threads)

def parse_config(path=None, overrides=(), flags=None):
    """ load a config file, apply command line overrides and fill defaults

    Args:
        path: path to a JSON config file, or None to configure from flags only
        overrides: "dotted.key=value" strings from --set. Values are parsed
            as JSON, falling back to plain strings.
        flags: dict of dotted key to value for the dedicated flags, applied
            last. None values are skipped.

    Returns:
        RunConfig

    Raises:
        ConfigError naming the source, line, key and violated constraint
    """

    data = {}
    source = _Source("command line")
    if path is not None:
        with open(path, "r") as handle:
            text = handle.read()
        source = _Source(path, text)
        try:
            data = json.loads(text)
        except ValueError as error:
            raise ConfigError("{0}:{1}: {2}".format(path, getattr(error, "lineno", "?"),
                getattr(error, "msg", str(error))))
        if not isinstance(data, dict):
            raise ConfigError("{0}: top level must be a mapping".format(path))

    for override in overrides:
        if "=" not in override:
            raise ConfigError("command line: {0}: expected key=value".format(override))
        key, value = override.split("=", 1)
        _apply_override(data, key.strip(), _parse_value(value), source)

    for key, value in (flags or {}).items():
        if value is not None:
            _apply_override(data, key, value, source)

    return _build(data, source)

def config_from_dict(data, threads=None, name="<dict>"):
    """ validate a config mapping, such as the config block of a manifest
    """

    data = copy.deepcopy(data)
    if threads is not None:
        data["threads"] = threads

    return _build(data, _Source(name))

def config_from_manifest(path, threads=1):
    """ rebuild the RunConfig recorded in a manifest.json

    The manifest doesn't record the worker count, so it comes from the caller.
    """

    with open(path, "r") as handle:
        manifest = json.load(handle)

    return config_from_dict(manifest["config"], threads, path)
