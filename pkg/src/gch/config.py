"""Experiment configuration: flat "key = value" text with bracketed sections.

The format is deliberately dependency-free and diff-friendly: one
``key = value`` per line, sections in brackets, comments starting with '#'.
Parsing reports every problem it finds (with line numbers), not just the
first; unknown keys and duplicates are rejected.  A parsed configuration
round-trips losslessly through :meth:`ExperimentConfig.to_text`, and
:func:`config_hash` of that canonical text keys all output artifacts.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .asymptotics import SourceVariant
from .dynamics import RhsForm
from .errors import ConfigError
from .fields import INITIAL_KINDS

__all__ = ["ExperimentConfig", "parse_config", "parse_config_file", "config_hash"]

DIAGNOSTIC_NAMES = ("persistence", "asymptotics", "analyticity")
VARIANT_NAMES = {"thm41": SourceVariant.MEAN, "thm43": SourceVariant.RMS}


@dataclass
class ExperimentConfig:
    # [grid]
    n: int = 1024
    L: float = 40.0
    # [time]
    T: float = 0.5
    snapshot_stride: int = 1
    dt: float | None = None
    # [initial]
    kind: str = "sech2"
    amplitude: float = 0.05
    width: float = 1.0
    center: float = 0.0
    path: str | None = None
    # [dynamics]
    form: RhsForm = RhsForm.FORM_B
    dealias: bool = True
    # [weights]
    phi: tuple = (0.0, 0.0, 2.0, 0.0)
    v: tuple | None = None
    p: float = np.inf
    N: float | None = None
    # [diagnostics]
    run: tuple = ()
    window: tuple | None = None
    d: float = 1.0
    variant: str = "thm41"
    t_star: float | None = None
    psi_literal: bool = False
    # [output]
    out_dir: str = "out"
    seed: int = 0

    @property
    def source_variant(self) -> SourceVariant:
        return VARIANT_NAMES[self.variant]

    def resolved_window(self) -> tuple:
        """Default tail window [0.25 L, 0.5 L] unless set explicitly."""
        if self.window is not None:
            return self.window
        return (0.25 * self.L, 0.5 * self.L)

    def to_text(self) -> str:
        """Canonical serialization; parse_config(to_text()) reproduces self."""

        def fmt(value):
            if value is None:
                return "none"
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, float) and np.isinf(value):
                return "inf"
            if isinstance(value, (tuple, list)):
                return ",".join(fmt(item) for item in value)
            if isinstance(value, RhsForm):
                return value.value
            return repr(value) if isinstance(value, float) else str(value)

        lines = [
            "[grid]",
            f"n = {fmt(self.n)}",
            f"L = {fmt(self.L)}",
            "[time]",
            f"T = {fmt(self.T)}",
            f"snapshot_stride = {fmt(self.snapshot_stride)}",
            f"dt = {fmt(self.dt)}",
            "[initial]",
            f"kind = {fmt(self.kind)}",
            f"amplitude = {fmt(self.amplitude)}",
            f"width = {fmt(self.width)}",
            f"center = {fmt(self.center)}",
            f"path = {fmt(self.path)}",
            "[dynamics]",
            f"form = {fmt(self.form)}",
            f"dealias = {fmt(self.dealias)}",
            "[weights]",
            f"phi = {fmt(self.phi)}",
            f"v = {fmt(self.v)}",
            f"p = {fmt(self.p)}",
            f"N = {fmt(self.N)}",
            "[diagnostics]",
            f"run = {fmt(self.run) if self.run else 'none'}",
            f"window = {fmt(self.window)}",
            f"d = {fmt(self.d)}",
            f"variant = {fmt(self.variant)}",
            f"t_star = {fmt(self.t_star)}",
            f"psi_literal = {fmt(self.psi_literal)}",
            "[output]",
            f"dir = {fmt(self.out_dir)}",
            f"seed = {fmt(self.seed)}",
        ]
        return "\n".join(lines) + "\n"


def config_hash(cfg: ExperimentConfig) -> str:
    """Short provenance hash of the canonical serialization."""
    return hashlib.sha256(cfg.to_text().encode()).hexdigest()[:12]


def _parse_bool(text):
    t = text.lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_float(text):
    t = text.lower()
    if t in ("inf", "infinity"):
        return float("inf")
    return float(text)


def _parse_optional(parser):
    def run(text):
        if text.lower() in ("none", "auto", ""):
            return None
        return parser(text)

    return run


def _parse_float_tuple(count):
    def run(text):
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != count:
            raise ValueError(f"expected {count} comma-separated numbers, got {len(parts)}")
        return tuple(float(part) for part in parts)

    return run


def _parse_run_list(text):
    if text.lower() in ("none", ""):
        return ()
    parts = tuple(part.strip() for part in text.split(","))
    for part in parts:
        if part not in DIAGNOSTIC_NAMES:
            raise ValueError(f"unknown diagnostic {part!r}; choose from {DIAGNOSTIC_NAMES}")
    return parts


def _parse_form(text):
    try:
        return RhsForm(text.lower())
    except ValueError:
        names = ", ".join(form.value for form in RhsForm)
        raise ValueError(f"unknown form {text!r}; choose from {names}") from None


def _parse_kind(text):
    if text not in INITIAL_KINDS:
        raise ValueError(f"unknown initial kind {text!r}; choose from {INITIAL_KINDS}")
    return text


def _parse_variant(text):
    if text not in VARIANT_NAMES:
        raise ValueError(f"unknown variant {text!r}; choose from {tuple(VARIANT_NAMES)}")
    return text


def _parse_str(text):
    return text


# (section, key) -> (attribute, parser)
_SCHEMA = {
    ("grid", "n"): ("n", int),
    ("grid", "L"): ("L", _parse_float),
    ("time", "T"): ("T", _parse_float),
    ("time", "snapshot_stride"): ("snapshot_stride", int),
    ("time", "dt"): ("dt", _parse_optional(_parse_float)),
    ("initial", "kind"): ("kind", _parse_kind),
    ("initial", "amplitude"): ("amplitude", _parse_float),
    ("initial", "width"): ("width", _parse_float),
    ("initial", "center"): ("center", _parse_float),
    ("initial", "path"): ("path", _parse_optional(_parse_str)),
    ("dynamics", "form"): ("form", _parse_form),
    ("dynamics", "dealias"): ("dealias", _parse_bool),
    ("weights", "phi"): ("phi", _parse_float_tuple(4)),
    ("weights", "v"): ("v", _parse_optional(_parse_float_tuple(4))),
    ("weights", "p"): ("p", _parse_float),
    ("weights", "N"): ("N", _parse_optional(_parse_float)),
    ("diagnostics", "run"): ("run", _parse_run_list),
    ("diagnostics", "window"): ("window", _parse_optional(_parse_float_tuple(2))),
    ("diagnostics", "d"): ("d", _parse_float),
    ("diagnostics", "variant"): ("variant", _parse_variant),
    ("diagnostics", "t_star"): ("t_star", _parse_optional(_parse_float)),
    ("diagnostics", "psi_literal"): ("psi_literal", _parse_bool),
    ("output", "dir"): ("out_dir", _parse_str),
    ("output", "seed"): ("seed", int),
}

_SECTIONS = {section for section, _ in _SCHEMA}


def _validate(cfg: ExperimentConfig, errors: list) -> None:
    if cfg.n < 16 or (cfg.n & (cfg.n - 1)) != 0:
        errors.append(f"n must be a power of two >= 16, got {cfg.n}")
    if cfg.L <= 0:
        errors.append(f"L must be positive, got {cfg.L}")
    if cfg.T <= 0:
        errors.append(f"T must be positive, got {cfg.T}")
    if cfg.snapshot_stride < 1:
        errors.append(f"snapshot_stride must be >= 1, got {cfg.snapshot_stride}")
    if cfg.dt is not None and cfg.dt <= 0:
        errors.append(f"dt must be positive, got {cfg.dt}")
    if cfg.kind == "file" and cfg.path is None:
        errors.append("initial kind 'file' requires a path")
    if not (np.isinf(cfg.p) or cfg.p >= 1):
        errors.append(f"p must lie in [1, inf], got {cfg.p}")
    if cfg.N is not None and cfg.N <= 0:
        errors.append(f"N must be positive, got {cfg.N}")
    if cfg.d <= 0.5:
        errors.append(f"d must exceed 1/2, got {cfg.d}")
    if cfg.window is not None and not cfg.window[0] < cfg.window[1]:
        errors.append(f"window must satisfy x_lo < x_hi, got {cfg.window}")
    if cfg.t_star is not None and not (0 < cfg.t_star <= cfg.T):
        errors.append(f"t_star must lie in (0, T], got {cfg.t_star}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse configuration text; raises ConfigError with every problem found."""
    errors: list[str] = []
    seen: dict = {}
    cfg = ExperimentConfig()
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                errors.append(f"line {lineno}: unknown section [{section}]")
                section = None
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if section is None:
            errors.append(f"line {lineno}: key {key!r} outside any section")
            continue
        if (section, key) not in _SCHEMA:
            errors.append(f"line {lineno}: unknown key '{section}.{key}'")
            continue
        if (section, key) in seen:
            errors.append(
                f"line {lineno}: duplicate key '{section}.{key}' "
                f"(first set at line {seen[(section, key)]})"
            )
            continue
        seen[(section, key)] = lineno
        attr, parser = _SCHEMA[(section, key)]
        try:
            setattr(cfg, attr, parser(value))
        except (ValueError, TypeError) as exc:
            errors.append(f"line {lineno}: {section}.{key}: {exc}")

    _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def parse_config_file(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
