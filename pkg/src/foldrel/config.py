"""Run configuration: one JSON document, strictly validated.

Layout (every key optional)::

    {
      "units": "natural" | "si",
      "params": {"m": float, "c": float, "hbar": float},
      "output": "text" | "csv" | "json",
      "seed": int,
      "exponents": {"basis": [names], "target": "L=-2/3,T=0,M=0", "alpha4": "2/3"},
      "beta": {"E": float},
      "potential": {"beta": float, "B": float, "E": float, "r": [floats],
                    "draws": int},
      "clifford": {"k_samples": int},
      "dispersion": {"k_min": float, "k_max": float, "count": int,
                     "spacing": "linear" | "log"},
      "evolve": {"kind": "schrodinger" | "relativistic_free",
                 "n_points": int, "dx": float, "x_center": float, "k0": float,
                 "sigma": float, "dt": float, "steps": int, "sample_every": int,
                 "potential": "none" | "constant" | "revised",
                 "constant": float, "B": float, "tolerance": float,
                 "trajectory": path or null}
    }

Quantities are in the chosen unit system.  Natural units fix m = c = hbar = 1
unless overridden; ``"si"`` requires all three parameters explicitly.
"""
from __future__ import annotations

import copy
import json
from pathlib import Path

from foldrel.units import PhysParams


class ConfigError(ValueError):
    pass


NUM = (int, float)

SCHEMA: dict = {
    "units": str,
    "params": {"m": NUM, "c": NUM, "hbar": NUM},
    "output": (str, type(None)),
    "seed": int,
    "exponents": {"basis": list, "target": str, "alpha4": (str, int, type(None))},
    "beta": {"E": NUM},
    "potential": {"beta": NUM, "B": NUM, "E": NUM, "r": list, "draws": int},
    "clifford": {"k_samples": int},
    "dispersion": {"k_min": NUM, "k_max": NUM, "count": int, "spacing": str},
    "evolve": {
        "kind": str,
        "n_points": int,
        "dx": NUM,
        "x_center": NUM,
        "k0": NUM,
        "sigma": NUM,
        "dt": NUM,
        "steps": int,
        "sample_every": int,
        "potential": str,
        "constant": NUM,
        "B": NUM,
        "tolerance": NUM,
        "trajectory": (str, type(None)),
    },
}

DEFAULTS: dict = {
    "units": "natural",
    "params": {},
    "output": None,
    "seed": 0,
    "exponents": {"basis": ["m", "hbar", "c", "omega"], "target": "L=-2/3,T=0,M=0", "alpha4": None},
    "beta": {"E": 1.0},
    "potential": {"beta": 1.0, "B": 1.0, "E": 1.0, "r": [0.5, 1.0, 2.0, 8.0], "draws": 1000},
    "clifford": {"k_samples": 1000},
    "dispersion": {"k_min": 0.0, "k_max": 10.0, "count": 11, "spacing": "linear"},
    "evolve": {
        "kind": "relativistic_free",
        "n_points": 4096,
        "dx": 0.25,
        "x_center": -200.0,
        "k0": 1.0,
        "sigma": 10.0,
        "dt": 0.05,
        "steps": 10000,
        "sample_every": 100,
        "potential": "none",
        "constant": 0.0,
        "B": 0.0,
        "tolerance": 0.01,
        "trajectory": None,
    },
}

CHOICES = {
    ("units",): ("natural", "si"),
    ("output",): ("text", "csv", "json", None),
    ("dispersion", "spacing"): ("linear", "log"),
    ("evolve", "kind"): ("schrodinger", "relativistic_free"),
    ("evolve", "potential"): ("none", "constant", "revised"),
}


def _check(doc: dict, schema: dict, path: tuple = ()) -> None:
    if not isinstance(doc, dict):
        raise ConfigError(f"section {'.'.join(path) or '<root>'} must be an object")
    for key, value in doc.items():
        where = ".".join(path + (key,))
        if key not in schema:
            raise ConfigError(f"unknown config key: {where}")
        expected = schema[key]
        if isinstance(expected, dict):
            _check(value, expected, path + (key,))
            continue
        if isinstance(value, bool) or not isinstance(value, expected):
            raise ConfigError(f"config key {where} has wrong type {type(value).__name__}")
        allowed = CHOICES.get(path + (key,))
        if allowed is not None and value not in allowed:
            raise ConfigError(f"config key {where} must be one of {[a for a in allowed if a]}")


def merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path: str | Path | None) -> dict:
    """Defaults merged with the JSON document at ``path`` (if any)."""
    doc = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    _check(doc, SCHEMA)
    return merge(DEFAULTS, doc)


def validate(cfg: dict) -> dict:
    """Strict check of a fully merged config (after flag overrides)."""
    _check(cfg, SCHEMA)
    return cfg


def resolve_params(cfg: dict) -> PhysParams:
    given = cfg.get("params", {})
    if cfg["units"] == "si":
        missing = [k for k in ("m", "c", "hbar") if k not in given]
        if missing:
            raise ConfigError(f"si units require explicit params: missing {', '.join(missing)}")
    try:
        return PhysParams(**{k: float(v) for k, v in given.items()})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
