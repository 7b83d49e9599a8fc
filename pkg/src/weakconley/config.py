"""Run configuration for the command line.

A config is a JSON object::

    {
      "grid": {"axes": [{"periodic": true, "period": "1"}], "cell_width": "1/16",
               "offset": "0", "refinement": 4},
      "samples": "doubling.csv",
      "neighbourhoods": [
        {"name": "N1", "set": "[15/16, 1/16]"},
        {"name": "grown", "auto": {"seed": "[31/32, 1/32]", "max_k": 4}}
      ],
      "coefficients": "q",
      "report": "report.json",
      "figure": {"path": "graph.svg", "overlays": {"N": "[15/16, 1/16]"}},
      "audit": {"trials": 100, "random_systems": 20}
    }

Relative paths are resolved against the directory holding the config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .fields import Field, parse_coeffs
from .grid import GridError, GridSpec


class ConfigError(ValueError):
    pass


@dataclass
class NeighbourhoodSpec:
    name: str
    literal: str | None = None
    auto: dict | None = None
    w_target: str | None = None
    u_width: int = 1
    a_width: int = 1
    pair: dict | None = None  # optional explicit {"p1": literal, "p2": literal}


@dataclass
class RunConfig:
    grid: GridSpec
    samples: Path
    samples_name: str = ""
    samples_format: str | None = None
    neighbourhoods: list = field(default_factory=list)
    coefficients: Field = field(default_factory=Field)
    report: Path | None = None
    figure: dict = field(default_factory=dict)
    audit: dict = field(default_factory=dict)
    seed: int = 0
    base_dir: Path = Path(".")


def _need(obj, key, where="config"):
    if key not in obj:
        raise ConfigError(f"{where}: missing key {key!r}")
    return obj[key]


def _int(v, where):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}: expected an integer, got {v!r}")
    return v


def parse_config(obj: dict, base_dir: Path = Path(".")) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    try:
        grid = GridSpec.from_json(_need(obj, "grid"))
    except (GridError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from exc
    samples_name = str(_need(obj, "samples"))
    samples = Path(samples_name)
    if not samples.is_absolute():
        samples = base_dir / samples
    hoods = []
    names = set()
    for i, h in enumerate(obj.get("neighbourhoods", [])):
        where = f"neighbourhoods[{i}]"
        if not isinstance(h, dict):
            raise ConfigError(f"{where}: expected an object")
        name = str(h.get("name", f"N{i + 1}"))
        if name in names:
            raise ConfigError(f"{where}: duplicate name {name!r}")
        names.add(name)
        if ("set" in h) == ("auto" in h):
            raise ConfigError(f"{where}: give exactly one of 'set' and 'auto'")
        auto = h.get("auto")
        if auto is not None:
            if not isinstance(auto, dict) or "seed" not in auto:
                raise ConfigError(f"{where}: 'auto' needs a 'seed' literal")
            auto = {"seed": str(auto["seed"]), "max_k": _int(auto.get("max_k", 4), where)}
        pair = h.get("pair")
        if pair is not None and not (isinstance(pair, dict) and "p1" in pair and "p2" in pair):
            raise ConfigError(f"{where}: 'pair' needs 'p1' and 'p2' literals")
        hoods.append(NeighbourhoodSpec(
            name, h.get("set"), auto, h.get("w_target"),
            _int(h.get("u_width", 1), where), _int(h.get("a_width", 1), where), pair,
        ))
    try:
        coeffs = parse_coeffs(str(obj.get("coefficients", "q")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not isinstance(coeffs, Field):
        raise ConfigError("the index is reduced over a field: use q or zp:P")
    report = obj.get("report")
    fig = obj.get("figure") or {}
    if isinstance(fig, str):
        fig = {"path": fig}
    audit = obj.get("audit") or {}
    if not isinstance(audit, dict):
        raise ConfigError("audit must be an object")
    return RunConfig(
        grid=grid,
        samples=samples,
        samples_name=samples_name,
        samples_format=obj.get("samples_format"),
        neighbourhoods=hoods,
        coefficients=coeffs,
        report=None if report is None else base_dir / report,
        figure=fig,
        audit=audit,
        seed=_int(obj.get("seed", 0), "seed"),
        base_dir=base_dir,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(obj, path.parent)


__all__ = ["ConfigError", "NeighbourhoodSpec", "RunConfig", "load_config", "parse_config"]
