"""Run configuration: TOML parsing, defaults, validation, serialization.

A config names a built-in problem and optionally overrides model constants,
the spatial scheme and resolution, the velocity set, the projective time
stepper, and output paths. ``resolve_config`` fills unset keys from the
problem's experiment defaults and validates everything at once, collecting
all violations into a single error.

Environment variables prefixed ``KINPROJ_`` override file values, e.g.
``KINPROJ_TIME_EPS=1e-6`` sets ``time.eps``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

try:
    import tomllib as _toml
except ModuleNotFoundError:  # python < 3.11
    import tomli as _toml

from .errors import ParseError, ValidationError
from .problems import PROBLEM_NAMES, builtin_problem
from .space import SCHEMES

ENV_PREFIX = "KINPROJ_"


@dataclass
class ProblemSection:
    name: str = ""
    T: Optional[float] = None
    ic: str = "gauss"
    a: Optional[float] = None
    b: Optional[float] = None
    gamma: Optional[float] = None
    g: Optional[float] = None


@dataclass
class SpaceSection:
    scheme: Optional[str] = None
    I: Optional[int] = None
    I_y: Optional[int] = None
    bc: Optional[str] = None  # override the problem's boundary condition


@dataclass
class VelocitySection:
    sigma: Optional[float] = None
    R: int = 1
    S: int = 1
    v_max: Optional[float] = None
    # enlarging the velocities mid-run raises the kinetic CFL at fixed Dt and
    # can destabilize the outer integrator; default is to warn only
    rescale: bool = False


@dataclass
class TimeSection:
    outer: Optional[str] = None
    inner: str = "fe"
    eps: Optional[float] = None
    K: Optional[int] = None
    dt_inner: Optional[float] = None
    Dt: Optional[float] = None
    cfl: Optional[float] = None
    T: Optional[float] = None  # alias for problem.T; normalized on resolve


@dataclass
class OutputSection:
    dir: str = "out"
    prefix: Optional[str] = None
    snapshots: tuple = ()


@dataclass
class RunConfig:
    problem: ProblemSection = field(default_factory=ProblemSection)
    space: SpaceSection = field(default_factory=SpaceSection)
    velocities: VelocitySection = field(default_factory=VelocitySection)
    time: TimeSection = field(default_factory=TimeSection)
    output: OutputSection = field(default_factory=OutputSection)

    def model_params(self) -> dict:
        out = {}
        for key in ("a", "b", "gamma", "g"):
            val = getattr(self.problem, key)
            if val is not None:
                out[key] = val
        return out


_SECTIONS = {
    "problem": ProblemSection,
    "space": SpaceSection,
    "velocities": VelocitySection,
    "time": TimeSection,
    "output": OutputSection,
}

_OUTERS = ("pfe", "prk2", "prk4")
_INNERS = ("fe", "rk2")


def _canonical_key(section: str, key: str):
    """Resolve a key case-insensitively (env vars arrive upper-cased)."""
    for f in dataclasses.fields(_SECTIONS[section]):
        if f.name == key or f.name.lower() == key.lower():
            return f.name
    return None


def _coerce(section: str, key: str, value, violations: list):
    """Validate/convert one key; returns (canonical_key, value) or None."""
    canonical = _canonical_key(section, key)
    if canonical is None:
        violations.append(f"unknown key {section}.{key}")
        return None
    key = canonical
    if key in ("I", "I_y", "K", "R", "S"):
        if isinstance(value, bool) or not isinstance(value, int):
            violations.append(f"{section}.{key} must be an integer, got {value!r}")
            return None
        return key, value
    if key == "rescale":
        if not isinstance(value, bool):
            violations.append(f"{section}.{key} must be a boolean, got {value!r}")
            return None
        return key, value
    if key == "snapshots":
        if not isinstance(value, (list, tuple)):
            violations.append(f"{section}.{key} must be an array of times")
            return None
        try:
            return key, tuple(float(v) for v in value)
        except (TypeError, ValueError):
            violations.append(f"{section}.{key} must contain numbers")
            return None
    if key in ("name", "ic", "scheme", "outer", "inner", "dir", "prefix", "bc"):
        if not isinstance(value, str):
            violations.append(f"{section}.{key} must be a string, got {value!r}")
            return None
        return key, value
    # remaining keys are floats
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        violations.append(f"{section}.{key} must be a number, got {value!r}")
        return None
    return key, float(value)


def parse_config(text: str) -> RunConfig:
    """Parse TOML config text; raises ParseError / ValidationError."""
    try:
        raw = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ParseError(f"config is not valid TOML: {exc}") from None
    violations: list = []
    cfg = RunConfig()
    for section, body in raw.items():
        if section not in _SECTIONS:
            violations.append(f"unknown section [{section}]")
            continue
        if not isinstance(body, dict):
            violations.append(f"[{section}] must be a table")
            continue
        target = getattr(cfg, section)
        for key, value in body.items():
            coerced = _coerce(section, key, value, violations)
            if coerced is not None:
                setattr(target, coerced[0], coerced[1])
    if not cfg.problem.name:
        violations.append("problem.name is required")
    if violations:
        raise ValidationError(violations)
    return cfg


def apply_env_overrides(cfg: RunConfig, environ) -> RunConfig:
    """Apply KINPROJ_<SECTION>_<KEY> environment overrides in place."""
    violations: list = []
    for name, raw in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX):].lower()
        section, _, key = rest.partition("_")
        if section not in _SECTIONS:
            violations.append(f"env override {name}: unknown section {section!r}")
            continue
        try:
            value = _toml.loads(f"v = {raw}")["v"]
        except _toml.TOMLDecodeError:
            value = raw  # treat as bare string
        coerced = _coerce(section, key, value, violations)
        if coerced is not None:
            setattr(getattr(cfg, section), coerced[0], coerced[1])
    if violations:
        raise ValidationError(violations)
    return cfg


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_format_value(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical TOML text; parse_config(serialize_config(c)) == c."""
    lines = []
    for section, cls in _SECTIONS.items():
        body = getattr(cfg, section)
        entries = []
        for f in dataclasses.fields(cls):
            val = getattr(body, f.name)
            if val is None:
                continue
            if f.name == "name" and val == "":
                continue
            entries.append(f"{f.name} = {_format_value(val)}")
        if entries:
            lines.append(f"[{section}]")
            lines.extend(entries)
            lines.append("")
    return "\n".join(lines)


def resolve_config(cfg: RunConfig) -> RunConfig:
    """Fill defaults from the problem definition and validate everything."""
    violations: list = []
    c = dataclasses.replace(
        cfg,
        problem=dataclasses.replace(cfg.problem),
        space=dataclasses.replace(cfg.space),
        velocities=dataclasses.replace(cfg.velocities),
        time=dataclasses.replace(cfg.time),
        output=dataclasses.replace(cfg.output),
    )
    if c.problem.name not in PROBLEM_NAMES:
        raise ValidationError([f"unknown problem {c.problem.name!r}"])
    problem = builtin_problem(c.problem.name, ic=c.problem.ic, **c.model_params())
    d = problem.defaults

    if c.time.T is not None:
        if c.problem.T is not None:
            violations.append("set only one of problem.T and time.T")
        else:
            c.problem.T = c.time.T
        c.time.T = None
    if c.problem.T is None:
        c.problem.T = problem.T
    if c.space.bc is None:
        c.space.bc = problem.bc
    elif c.space.bc not in ("periodic", "outflow"):
        violations.append("space.bc must be 'periodic' or 'outflow'")
    if c.space.scheme is None:
        c.space.scheme = d["scheme"]
    if c.space.I is None:
        c.space.I = d["I"]
    if problem.D == 2 and c.space.I_y is None:
        c.space.I_y = d.get("I_y", c.space.I)
    if c.time.outer is None:
        c.time.outer = d["outer"]
    if c.time.eps is None:
        c.time.eps = d["eps"]
    if c.time.K is None:
        c.time.K = d["K"]
    if c.time.Dt is None and c.time.cfl is None:
        c.time.cfl = d["cfl"]
    if c.velocities.v_max is None and "v_max" in d:
        c.velocities.v_max = d["v_max"]

    if c.space.scheme not in SCHEMES:
        violations.append(f"space.scheme must be one of {sorted(SCHEMES)}")
    if c.time.outer not in _OUTERS:
        violations.append(f"time.outer must be one of {_OUTERS}")
    if c.time.inner not in _INNERS:
        violations.append(f"time.inner must be one of {_INNERS}")
    if c.time.eps is not None and c.time.eps <= 0:
        violations.append("time.eps must be positive")
    if c.time.K is not None and c.time.K < 0:
        violations.append("time.K must be >= 0")
    if c.space.I is not None and c.space.I < 4:
        violations.append("space.I must be >= 4")
    if problem.D == 2 and c.space.I_y is not None and c.space.I_y < 4:
        violations.append("space.I_y must be >= 4")
    if c.problem.T is not None and c.problem.T <= 0:
        violations.append("problem.T must be positive")
    if c.velocities.sigma is not None and c.velocities.sigma <= 0:
        violations.append("velocities.sigma must be positive")
    if c.velocities.v_max is not None and c.velocities.v_max <= 0:
        violations.append("velocities.v_max must be positive")
    if c.velocities.R < 1 or c.velocities.S < 1:
        violations.append("velocities.R and velocities.S must be >= 1")
    if c.time.Dt is not None and c.time.cfl is not None:
        violations.append("set only one of time.Dt and time.cfl")
    if c.time.dt_inner is not None and c.time.dt_inner <= 0:
        violations.append("time.dt_inner must be positive")

    # resolved outer step vs inner window
    if not violations:
        lo, hi = problem.extents[0]
        dx = (hi - lo) / c.space.I
        Dt = c.time.Dt if c.time.Dt is not None else c.time.cfl * dx
        delta_t = c.time.dt_inner if c.time.dt_inner is not None else c.time.eps
        if Dt < (c.time.K + 1) * delta_t:
            violations.append(
                f"outer step {Dt:g} smaller than (K+1) inner steps {(c.time.K + 1) * delta_t:g}"
            )
        for t in c.output.snapshots:
            if not (0.0 < t <= c.problem.T + 1e-12):
                violations.append(f"snapshot time {t:g} outside (0, T]")
    if violations:
        raise ValidationError(violations)
    return c


def make_config(problem_name: str, **overrides) -> RunConfig:
    """Programmatic resolved config; keyword names match the config keys."""
    cfg = RunConfig()
    cfg.problem.name = problem_name
    section_of = {}
    for section, cls in _SECTIONS.items():
        for f in dataclasses.fields(cls):
            section_of.setdefault(f.name, section)
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "out_dir":
            cfg.output.dir = value
            continue
        if key == "snapshots":
            cfg.output.snapshots = tuple(float(t) for t in value)
            continue
        section = section_of.get(key)
        if section is None:
            raise ValueError(f"unknown config key {key!r}")
        setattr(getattr(cfg, section), key, value)
    return resolve_config(cfg)
