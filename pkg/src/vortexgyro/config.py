"""Run configuration: a flat ``section.key = value`` text format in SI units.

Example::

    # 60:40 transfer, l = 100 readout
    seed = 7
    trap.atom_count = 1000000
    schedule.detuning = 628318.53
    superposition.l = 100
    probe.photon_rate = 1e10

Values given with ``--set`` on the command line override the file.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .condensate import TrapConfig
from .errors import InvalidParameter
from .imaging import ProbeConfig
from .stirap import PulseSchedule


@dataclass(frozen=True)
class SuperpositionSettings:
    """Vortex pair used by ``pattern`` and ``spin``.

    Without explicit amplitudes the pair is the equal superposition, or the
    STIRAP result when ``from_stirap`` is set.
    """

    l: int = 2
    b_plus: complex | None = None
    b_minus: complex | None = None
    from_stirap: bool = False
    per_charge_mu: bool = False

    def __post_init__(self):
        if self.l < 1:
            raise InvalidParameter("l", "charge magnitude must be >= 1")
        if (self.b_plus is None) != (self.b_minus is None):
            raise InvalidParameter("b_plus", "set both b_plus and b_minus, or neither")


@dataclass(frozen=True)
class RotationSettings:
    omega: float = 0.05
    t_start: float = 0.0
    t_end: float = 10.0
    n_frames: int = 11

    def __post_init__(self):
        if self.n_frames < 1:
            raise InvalidParameter("n_frames", "must be >= 1")
        if self.t_start < 0:
            raise InvalidParameter("t_start", "must be non-negative")
        if self.t_end < self.t_start:
            raise InvalidParameter("t_end", "must not precede t_start")


@dataclass(frozen=True)
class PatternSettings:
    t: float = 0.0
    n_pixels: int = 256
    span: float = 1.5
    mode: str = "slice"
    bits: int = 8
    supersample: int = 5

    def __post_init__(self):
        if self.t < 0:
            raise InvalidParameter("t", "must be non-negative")
        if self.n_pixels < 2:
            raise InvalidParameter("n_pixels", "must be >= 2")
        if self.span <= 0:
            raise InvalidParameter("span", "must be positive")
        if self.mode not in ("slice", "column"):
            raise InvalidParameter("mode", "must be 'slice' or 'column'")
        if self.bits not in (8, 16):
            raise InvalidParameter("bits", "must be 8 or 16")
        if self.supersample < 1:
            raise InvalidParameter("supersample", "must be >= 1")


@dataclass(frozen=True)
class ReadoutSettings:
    center: str = "centroid"
    ring_mask: bool = False
    contrast_floor: float = 0.05
    margin: float = 0.3

    def __post_init__(self):
        if self.center not in ("centroid", "grid"):
            raise InvalidParameter("center", "must be 'centroid' or 'grid'")
        if not 0 < self.margin < 3.14159:
            raise InvalidParameter("margin", "must lie in (0, pi)")


@dataclass(frozen=True)
class SnrSettings:
    n_min: float = 1e6
    n_max: float = 1e12
    n_points: int = 121
    t: float = 1.0

    def __post_init__(self):
        if not 0 < self.n_min < self.n_max:
            raise InvalidParameter("n_min", "need 0 < n_min < n_max")
        if self.n_points < 2:
            raise InvalidParameter("n_points", "must be >= 2")
        if self.t <= 0:
            raise InvalidParameter("t", "must be positive")


@dataclass(frozen=True)
class RunConfig:
    trap: TrapConfig = field(default_factory=TrapConfig)
    schedule: PulseSchedule = field(default_factory=PulseSchedule)
    superposition: SuperpositionSettings = field(default_factory=SuperpositionSettings)
    rotation: RotationSettings = field(default_factory=RotationSettings)
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    pattern: PatternSettings = field(default_factory=PatternSettings)
    readout: ReadoutSettings = field(default_factory=ReadoutSettings)
    snr: SnrSettings = field(default_factory=SnrSettings)
    output_dir: str = "out"
    seed: int = 0


SECTIONS = ("trap", "schedule", "superposition", "rotation", "probe", "pattern", "readout", "snr")
# The base seed lives at top level; per-image seeds derive from it.
_HIDDEN = {("probe", "rng_seed")}


class ConfigError(InvalidParameter):
    pass


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _coerce(default, text):
    text = text.strip()
    if isinstance(default, bool):
        return _parse_bool(text)
    if isinstance(default, int):
        value = float(text)
        if value != int(value):
            raise ValueError(f"not an integer: {text!r}")
        return int(value)
    if isinstance(default, float):
        return float(text)
    if default is None or isinstance(default, complex):
        return None if text.lower() in ("", "none") else complex(text.replace(" ", ""))
    return text


def _section_defaults(section):
    cls = type(getattr(RunConfig(), section))
    return cls, {f.name: getattr(cls(), f.name) for f in dataclasses.fields(cls)}


def parse_pairs(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        pairs.append((key.strip(), value.strip()))
    return pairs


def build_config(pairs, base: RunConfig | None = None):
    """Apply ``(key, value)`` overrides to ``base`` and validate every section."""
    base = base or RunConfig()
    updates = {s: {} for s in SECTIONS}
    top = {}
    for key, value in pairs:
        section, dot, name = key.partition(".")
        if not dot:
            if key not in ("output_dir", "seed"):
                raise ConfigError(key, "unknown key")
            try:
                top[key] = _coerce(getattr(base, key), value)
            except ValueError as exc:
                raise ConfigError(key, str(exc)) from None
            continue
        if section not in SECTIONS:
            raise ConfigError(key, "unknown section")
        _, defaults = _section_defaults(section)
        if name not in defaults or (section, name) in _HIDDEN:
            raise ConfigError(key, "unknown key")
        try:
            updates[section][name] = _coerce(defaults[name], value)
        except ValueError as exc:
            raise ConfigError(key, str(exc)) from None

    seed = top.get("seed", base.seed)
    if seed < 0:
        raise ConfigError("seed", "must be non-negative")
    updates["probe"]["rng_seed"] = seed
    built = {}
    for section in SECTIONS:
        current = getattr(base, section)
        try:
            built[section] = dataclasses.replace(current, **updates[section])
        except InvalidParameter as exc:
            raise ConfigError(f"{section}.{exc.field}", str(exc).split(": ", 1)[-1]) from None
    return RunConfig(**built, output_dir=top.get("output_dir", base.output_dir), seed=seed)


def load_config(path=None, overrides=(), seed=None, output_dir=None):
    """Read a config file (optional), then apply ``--set`` pairs and flag overrides."""
    pairs = parse_pairs(Path(path).read_text()) if path else []
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "expected key=value")
        key, _, value = item.partition("=")
        pairs.append((key.strip(), value.strip()))
    if seed is not None:
        pairs.append(("seed", str(seed)))
    if output_dir is not None:
        pairs.append(("output_dir", str(output_dir)))
    return build_config(pairs)


def _dump_value(value):
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return repr(value).strip("()")
    return str(value)


def dump_config(cfg: RunConfig):
    """Serialize every effective setting; :func:`build_config` reads it back exactly."""
    lines = [f"seed = {cfg.seed}", f"output_dir = {cfg.output_dir}"]
    for section in SECTIONS:
        sub = getattr(cfg, section)
        for f in dataclasses.fields(sub):
            if (section, f.name) in _HIDDEN:
                continue
            lines.append(f"{section}.{f.name} = {_dump_value(getattr(sub, f.name))}")
    return "\n".join(lines) + "\n"
