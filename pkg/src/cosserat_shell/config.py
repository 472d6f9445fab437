"""Run configuration: a flat ``key = value`` format grouped by ``[section]`` headers.

Blank lines and lines starting with ``#`` are ignored. Every error is reported
with the line it refers to, and all errors of a file are collected before
raising :class:`ConfigError`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .admissibility import validate_material
from .energy import MaterialParams, ModelOrder
from .errors import ConfigError
from .fem.assembly import LoadSpec

CHART_KINDS = ("plane", "cylinder", "sphere", "graph", "saddle")
PROFILES = ("constant", "sinsin")
METHODS = ("cg", "direct")


@dataclass(frozen=True)
class ChartConfig:
    kind: str = "plane"
    x1_min: float = 0.0
    x1_max: float = 1.0
    x2_min: float = 0.0
    x2_max: float = 1.0
    radius: float = 1.0
    scale: float = 0.5
    poly: tuple = ()
    trig: tuple = ()

    @property
    def domain(self):
        return ((self.x1_min, self.x1_max), (self.x2_min, self.x2_max))

    def build(self):
        if self.kind == "plane":
            return geometry.plane(self.domain)
        if self.kind == "cylinder":
            return geometry.cylinder(self.radius, self.domain)
        if self.kind == "sphere":
            return geometry.sphere(self.radius, self.domain)
        if self.kind == "saddle":
            return geometry.saddle(self.scale, self.domain)
        return geometry.graph(self.poly, self.trig, self.domain)


@dataclass(frozen=True)
class ModelConfig:
    order: str = "H5"
    h: float = 0.1


@dataclass(frozen=True)
class MeshConfig:
    nx: int = 8
    ny: int = 8


@dataclass(frozen=True)
class LoadConfig:
    f: tuple = (0.0, 0.0, 0.0)
    f_profile: str = "constant"
    c: tuple = (0.0, 0.0, 0.0)
    c_profile: str = "constant"

    def build(self, domain):
        (a, b), (c, d) = domain

        def field_of(vec, profile):
            vec = np.asarray(vec, dtype=float)
            if not np.any(vec):
                return None
            if profile == "constant":
                return vec

            def g(x):
                s = (np.sin(math.pi * (x[..., 0] - a) / (b - a))
                     * np.sin(math.pi * (x[..., 1] - c) / (d - c)))
                return s[..., None] * vec
            return g

        return LoadSpec(f=field_of(self.f, self.f_profile), c=field_of(self.c, self.c_profile))


@dataclass(frozen=True)
class SolverConfig:
    method: str = "cg"
    tol: float = 1e-10
    max_iter: int = 0  # 0 selects 10 * ndof
    quad_degree: int = 4


@dataclass(frozen=True)
class FlagsConfig:
    weak_form_factor: float = 1.0
    weight_loads_by_det: bool = False
    override_admissibility: bool = False
    strict_ratio: bool = False
    kappa_grid: int = 64


@dataclass(frozen=True)
class StudyConfig:
    levels: int = 4
    base: int = 8


@dataclass(frozen=True)
class RunConfig:
    chart: ChartConfig
    material: MaterialParams
    model: ModelConfig
    mesh: MeshConfig = field(default_factory=MeshConfig)
    loads: LoadConfig = field(default_factory=LoadConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    flags: FlagsConfig = field(default_factory=FlagsConfig)
    study: StudyConfig = field(default_factory=StudyConfig)


# --- value parsers -------------------------------------------------------------


def _float(s):
    return float(s)


def _int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"expected an integer, got {s!r}")
    return int(v)


def _bool(s):
    low = s.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _vec3(s):
    parts = s.replace(",", " ").split()
    if len(parts) != 3:
        raise ValueError(f"expected three numbers, got {s!r}")
    return tuple(float(p) for p in parts)


def _terms(width, casts):
    def parse(s):
        out = []
        for chunk in filter(None, (t.strip() for t in s.split(";"))):
            parts = chunk.replace(",", " ").split()
            if len(parts) != width:
                raise ValueError(f"expected {width} numbers per term, got {chunk!r}")
            out.append(tuple(c(p) for c, p in zip(casts, parts)))
        return tuple(out)
    return parse


def _choice(options, upper=False):
    def parse(s):
        v = s.upper() if upper else s.lower()
        if v not in options:
            raise ValueError(f"unknown value {s!r}; expected one of {', '.join(options)}")
        return v
    return parse


# section -> key -> (attribute, parser)
SCHEMA = {
    "chart": {
        "kind": ("kind", _choice(CHART_KINDS)),
        "x1_min": ("x1_min", _float), "x1_max": ("x1_max", _float),
        "x2_min": ("x2_min", _float), "x2_max": ("x2_max", _float),
        "radius": ("radius", _float), "scale": ("scale", _float),
        "poly": ("poly", _terms(3, (_int, _int, _float))),
        "trig": ("trig", _terms(4, (_float,) * 4)),
    },
    "material": {k: (a, _float) for k, a in (("mu", "mu"), ("lambda", "lam"), ("muc", "muc"),
                                             ("Lc", "Lc"), ("b1", "b1"), ("b2", "b2"),
                                             ("b3", "b3"))},
    "model": {"order": ("order", _choice(tuple(m.value for m in ModelOrder), upper=True)),
              "h": ("h", _float)},
    "mesh": {"nx": ("nx", _int), "ny": ("ny", _int)},
    "loads": {"f": ("f", _vec3), "f_profile": ("f_profile", _choice(PROFILES)),
              "c": ("c", _vec3), "c_profile": ("c_profile", _choice(PROFILES))},
    "solver": {"method": ("method", _choice(METHODS)), "tol": ("tol", _float),
               "max_iter": ("max_iter", _int), "quad_degree": ("quad_degree", _int)},
    "flags": {"weak_form_factor": ("weak_form_factor", _float),
              "weight_loads_by_det": ("weight_loads_by_det", _bool),
              "override_admissibility": ("override_admissibility", _bool),
              "strict_ratio": ("strict_ratio", _bool),
              "kappa_grid": ("kappa_grid", _int)},
    "study": {"levels": ("levels", _int), "base": ("base", _int)},
}
REQUIRED = {
    "chart": ("kind",),
    "material": ("mu", "lambda", "muc", "Lc", "b1", "b2", "b3"),
    "model": ("order", "h"),
}
_CLASSES = {"chart": ChartConfig, "model": ModelConfig, "mesh": MeshConfig,
            "loads": LoadConfig, "solver": SolverConfig, "flags": FlagsConfig,
            "study": StudyConfig}
# material messages -> offending key
_MATERIAL_KEYS = (("mu>0", "mu"), ("2λ+μ", "lambda"), ("μ_c", "muc"), ("L_c", "Lc"),
                  ("b1", "b1"), ("b2", "b2"), ("b3", "b3"))


def _tokenize(text):
    """Yield ``(lineno, section, key, value)`` and collect syntax errors."""
    errors, entries, section = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                errors.append((lineno, f"malformed section header {raw.strip()!r}"))
                continue
            section = line[1:-1].strip().lower()
            if section not in SCHEMA:
                errors.append((lineno, f"unknown section [{section}]"))
            continue
        if "=" not in line:
            errors.append((lineno, f"expected 'key = value', got {raw.strip()!r}"))
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            errors.append((lineno, f"key {key!r} outside of any section"))
            continue
        entries.append((lineno, section, key, value))
    return entries, errors


def parse_config_text(text):
    entries, errors = _tokenize(text)
    values = {s: {} for s in SCHEMA}
    lines = {s: {} for s in SCHEMA}
    section_lines = {}
    for lineno, section, key, raw in entries:
        if section not in SCHEMA:
            continue
        section_lines.setdefault(section, lineno)
        spec = SCHEMA[section].get(key)
        if spec is None:
            errors.append((lineno, f"unknown key {key!r} in [{section}]"))
            continue
        if key in values[section]:
            errors.append((lineno, f"duplicate key {key!r} in [{section}]"))
            continue
        attr, parse = spec
        try:
            values[section][attr] = parse(raw)
        except ValueError as exc:
            errors.append((lineno, f"[{section}] {key}: {exc}"))
            continue
        lines[section][key] = lineno
    for section, keys in REQUIRED.items():
        for key in keys:
            attr = SCHEMA[section][key][0]
            if attr not in values[section] and key not in lines[section]:
                if not any(e[1].startswith(f"[{section}] {key}:") for e in errors):
                    errors.append((section_lines.get(section, 0),
                                   f"missing key {key!r} in [{section}]"))
    if errors:
        raise ConfigError(sorted(errors, key=lambda e: e[0]))

    built = {name: cls(**values[name]) for name, cls in _CLASSES.items()}
    material = MaterialParams(**values["material"])
    _validate(built, material, lines, errors)
    if errors:
        raise ConfigError(sorted(errors, key=lambda e: e[0]))
    return RunConfig(material=material, **built)


def _validate(built, material, lines, errors):
    chart, model, mesh = built["chart"], built["model"], built["mesh"]
    solver, flags, study = built["solver"], built["flags"], built["study"]

    def err(section, key, msg):
        errors.append((lines[section].get(key, 0), msg))

    for msg in validate_material(material, model.order):
        key = next((k for p, k in _MATERIAL_KEYS if msg.startswith(p)), "mu")
        err("material", key, msg)
    if not model.h > 0:
        err("model", "h", "h>0 required")
    if not (chart.x1_max > chart.x1_min and chart.x2_max > chart.x2_min):
        err("chart", "x1_max", "degenerate parameter rectangle")
    if chart.kind in ("cylinder", "sphere") and not chart.radius > 0:
        err("chart", "radius", "radius>0 required")
    if chart.kind != "plane" and model.order == ModelOrder.PLATE.value:
        err("model", "order", "PLATE model requires a flat chart")
    for key in ("nx", "ny"):
        if getattr(mesh, key) < 1:
            err("mesh", key, f"{key}>=1 required")
    if not solver.tol > 0:
        err("solver", "tol", "tol>0 required")
    if solver.max_iter < 0:
        err("solver", "max_iter", "max_iter>=0 required")
    if solver.quad_degree < 1:
        err("solver", "quad_degree", "quad_degree>=1 required")
    if flags.weak_form_factor not in (1.0, 2.0):
        err("flags", "weak_form_factor", "weak_form_factor must be 1 or 2")
    if flags.kappa_grid < 2:
        err("flags", "kappa_grid", "kappa_grid>=2 required")
    if study.levels < 1 or study.base < 1:
        err("study", "levels", "levels>=1 and base>=1 required")


def parse_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError([(0, f"cannot read {path}: {exc.strerror or exc}")]) from exc
    return parse_config_text(text)


# --- dumping -------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return "; ".join(" ".join(_fmt(x) for x in term) for term in v)
        return " ".join(_fmt(x) for x in v)
    return str(v)


def dump_config(cfg):
    """Effective configuration as text; ``parse_config_text(dump_config(c)) == c``."""
    out = []
    for section, keys in SCHEMA.items():
        obj = cfg.material if section == "material" else getattr(cfg, section)
        out.append(f"[{section}]")
        for key, (attr, _) in keys.items():
            value = getattr(obj, attr)
            if value == ():
                continue
            out.append(f"{key} = {_fmt(value)}")
        out.append("")
    return "\n".join(out)
