"""JSON run configuration: materials, stacks and per-command sections.

All quantities are SI; keys carry unit suffixes (``_m``, ``_rad_s``, ``_V``).
Validation errors raise :class:`ConfigError` with a JSON path such as
``$.stacks.sphere_thin.films[1].material``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dielectric import (Constant, DielectricModel, Drude, DrudeParams, OpticalTable,
                         Oscillator, Oscillators, Sum, Tabulated, Vacuum)
from .errors import CasimirError, ConfigError
from .lifshitz import QuadratureConfig
from .stack import Layer, LayerStack


def _get(obj, key, path, kind=None, default=...):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    if key not in obj:
        if default is ...:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    value = obj[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
        return float(value)
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _wrap(path, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (CasimirError, ValueError, OSError) as exc:
        raise ConfigError(path, str(exc)) from exc


@dataclass
class RunConfig:
    """Parsed configuration with all name references resolved."""

    raw: dict
    base_dir: Path
    materials: dict[str, DielectricModel] = field(default_factory=dict)
    stacks: dict[str, LayerStack] = field(default_factory=dict)

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError("$", f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(raw, path.parent)

    @classmethod
    def from_dict(cls, raw, base_dir="."):
        if not isinstance(raw, dict):
            raise ConfigError("$", "top level must be an object")
        cfg = cls(raw, Path(base_dir))
        mats = dict(cfg._materials_file(raw))
        mats.update(_get(raw, "materials", "$", dict, {}))
        for name in mats:
            cfg.materials[name] = cfg._material(mats[name], f"$.materials.{name}", mats, set())
        for name, spec in _get(raw, "stacks", "$", dict, {}).items():
            cfg.stacks[name] = cfg._stack(spec, f"$.stacks.{name}")
        return cfg

    def _materials_file(self, raw):
        """Materials from ``materials_file`` (``"sample"`` selects the bundled set)."""
        ref = _get(raw, "materials_file", "$", str, None)
        if ref is None:
            return {}
        if ref == "sample":
            data = sample_materials()
        else:
            try:
                data = json.loads(self.resolve(ref).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError("$.materials_file", str(exc)) from exc
        return _get(data, "materials", "$.materials_file", dict)

    def resolve(self, path_str):
        p = Path(path_str)
        return p if p.is_absolute() else self.base_dir / p

    # materials -----------------------------------------------------------

    def _material(self, spec, path, table, seen):
        if isinstance(spec, str):
            if spec not in table:
                raise ConfigError(path, f"unknown material {spec!r}")
            if spec in seen:
                raise ConfigError(path, f"circular material reference {spec!r}")
            if spec in self.materials:
                return self.materials[spec]
            return self._material(table[spec], f"$.materials.{spec}", table, seen | {spec})
        kind = _get(spec, "type", path, str)
        if kind == "vacuum":
            return Vacuum()
        if kind == "constant":
            return _wrap(path, Constant, _get(spec, "eps", path, float))
        if kind == "drude":
            return _wrap(path, Drude, self._drude(spec, path))
        if kind == "oscillators":
            items = _get(spec, "oscillators", path, list)
            oscs = []
            for i, o in enumerate(items):
                p = f"{path}.oscillators[{i}]"
                oscs.append(_wrap(p, Oscillator, _get(o, "strength", p, float),
                                  _get(o, "omega_0_rad_s", p, float),
                                  _get(o, "gamma_rad_s", p, float, 0.0)))
            return _wrap(path, Oscillators, tuple(oscs))
        if kind == "tabulated":
            csv_path = self.resolve(_get(spec, "csv", path, str))
            drude = None
            if "drude_tail" in spec:
                drude = self._drude(spec["drude_tail"], f"{path}.drude_tail")
            extrap = _get(spec, "extrapolation", path, str, "auto")
            table = _wrap(f"{path}.csv", OpticalTable.from_csv, csv_path, extrap, drude)
            return Tabulated(table)
        if kind == "sum":
            parts = _get(spec, "parts", path, list)
            return Sum(tuple(self._material(p, f"{path}.parts[{i}]", table, seen)
                             for i, p in enumerate(parts)))
        raise ConfigError(f"{path}.type", f"unknown material type {kind!r}")

    def _drude(self, spec, path):
        return _wrap(path, DrudeParams, _get(spec, "omega_p_rad_s", path, float),
                     _get(spec, "gamma_rad_s", path, float))

    def material(self, name, path):
        if name == "vacuum" and name not in self.materials:
            return Vacuum()
        if not isinstance(name, str) or name not in self.materials:
            raise ConfigError(path, f"unknown material {name!r}")
        return self.materials[name]

    # stacks --------------------------------------------------------------

    def _stack(self, spec, path):
        substrate = self.material(_get(spec, "substrate", path, str), f"{path}.substrate")
        films = []
        for i, f in enumerate(_get(spec, "films", path, list, [])):
            p = f"{path}.films[{i}]"
            mat = self.material(_get(f, "material", p, str), f"{p}.material")
            films.append(_wrap(p, Layer, mat, _get(f, "thickness_m", p, float)))
        return LayerStack(substrate, tuple(films))

    def stack(self, name, path):
        if isinstance(name, dict):
            return self._stack(name, path)
        if not isinstance(name, str) or name not in self.stacks:
            raise ConfigError(path, f"unknown stack {name!r}")
        return self.stacks[name]

    # sections ------------------------------------------------------------

    def section(self, name):
        return _get(self.raw, name, "$", dict)

    def force_setup(self, section, path):
        """Resolve a force section into keyword arguments for the force driver."""
        sphere = self.stack(_get(section, "sphere", path), f"{path}.sphere")
        plate = self.stack(_get(section, "plate", path), f"{path}.plate")
        gap = self.material(_get(section, "gap", path, str, "vacuum"), f"{path}.gap")
        radius = _get(section, "radius_m", path, float)
        if not radius > 0:
            raise ConfigError(f"{path}.radius_m", "must be positive")
        seps = grid(_get(section, "separations_m", path), f"{path}.separations_m")
        quad = self.quadrature(_get(section, "quadrature", path, dict, {}), f"{path}.quadrature")
        rough = _get(section, "roughness", path, dict, None)
        return dict(sphere=sphere, plate=plate, gap=gap, radius=radius,
                    separations=seps, quad=quad, roughness=rough)

    @staticmethod
    def quadrature(spec, path):
        kw = {}
        mapping = {"rel_tol": "rel_tol", "x_max": "x_max", "xi_max_rad_s": "xi_max",
                   "max_evals": "max_evals"}
        for key, attr in mapping.items():
            if key in spec:
                kw[attr] = _get(spec, key, path, float)
        if "max_evals" in kw:
            kw["max_evals"] = int(kw["max_evals"])
        if "scheme" in spec:
            kw["scheme"] = _get(spec, "scheme", path, str)
        return _wrap(path, QuadratureConfig, **kw)


def grid(spec, path):
    """A list of numbers, or ``{start, stop, num, spacing}`` (keys with any unit suffix)."""
    if isinstance(spec, list):
        try:
            values = [float(v) for v in spec]
        except (TypeError, ValueError) as exc:
            raise ConfigError(path, "expected a list of numbers") from exc
        return values
    if not isinstance(spec, dict):
        raise ConfigError(path, "expected a list or a {start, stop, num} object")
    keys = {k.split("_")[0]: k for k in spec}
    for k in ("start", "stop", "num"):
        if k not in keys:
            raise ConfigError(f"{path}.{k}", "missing required key")
    start = _get(spec, keys["start"], path, float)
    stop = _get(spec, keys["stop"], path, float)
    num = int(_get(spec, keys["num"], path, float))
    spacing = spec.get("spacing", "linear")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(path, "log spacing needs positive bounds")
        return np.geomspace(start, stop, num).tolist()
    if spacing == "linear":
        return np.linspace(start, stop, num).tolist()
    raise ConfigError(f"{path}.spacing", f"unknown spacing {spacing!r}")


def sample_materials():
    """The bundled sample material definitions (illustrative values only)."""
    from importlib.resources import files

    return json.loads(files("casimirlab").joinpath("data/materials.sample.json").read_text())
