"""Machine configuration files.

A config is a JSON object::

    {"kind": "imperfect", "a0": [0.8660254037844386, 0], "a1": [0, 0.5],
     "b0": [0, 0.5], "b1": [0.8660254037844386, 0], "sigma_theta": 0.0}

Complex values are always ``[re, im]`` pairs. Allowed fields per kind:

=========  ==============================================================
wz         (none)
bh         xi (default 1/6)
pb         sigma_theta
imperfect  a0, a1, b0, b1, sigma_theta  -- or --  delta, sigma_theta
general    a0, a1, b0, b1, p0, p1, ancilla_norms, cross_overlaps, sigma_theta
qiu        a0, b0, a1, b1, sigma_theta
=========  ==============================================================

``ancilla_norms`` maps ``A0..C1`` to reals; ``cross_overlaps`` maps
``C1B0``/``B1C0`` to complex pairs. A pipeline file holds two configs under
``"cloner"`` and ``"deleter"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UsageError
from .machines import (
    GeneralDeleterParams,
    ImperfectDeleterParams,
    MachineSpec,
    bh_machine,
    general_delete_machine,
    imperfect_delete_machine,
    pb_delete_machine,
    qiu_machine,
    sigma_from_theta,
    wz_machine,
)

KINDS = ("wz", "bh", "pb", "imperfect", "general", "qiu")
CLONERS = ("wz", "bh")
DELETERS = ("pb", "imperfect", "general", "qiu")

_ALLOWED = {
    "wz": set(),
    "bh": {"xi"},
    "pb": {"sigma_theta"},
    "imperfect": {"a0", "a1", "b0", "b1", "delta", "sigma_theta"},
    "general": {"a0", "a1", "b0", "b1", "p0", "p1", "ancilla_norms", "cross_overlaps", "sigma_theta"},
    "qiu": {"a0", "b0", "a1", "b1", "sigma_theta"},
}
_REQUIRED = {
    "general": {"a0", "a1", "b0", "b1"},
    "qiu": {"a0", "b0", "a1", "b1"},
}
_COMPLEX = {"a0", "a1", "b0", "b1", "p0", "p1"}


class ConfigError(UsageError):
    """Malformed machine configuration."""


@dataclass(frozen=True)
class MachineConfig:
    kind: str
    xi: float | None = None
    sigma_theta: float = 0.0
    delta: float | None = None
    coeffs: dict[str, complex] = field(default_factory=dict)
    ancilla_norms: dict[str, float] = field(default_factory=dict)
    cross_overlaps: dict[str, complex] = field(default_factory=dict)

    @property
    def is_cloner(self) -> bool:
        return self.kind in CLONERS


def _real(name, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    return value


def _complex(name, value) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f"{name} must be a [re, im] pair, got {value!r}")
    return complex(_real(f"{name}[0]", value[0]), _real(f"{name}[1]", value[1]))


def parse_machine_config(data) -> MachineConfig:
    if not isinstance(data, dict):
        raise ConfigError("machine config must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {', '.join(KINDS)}; got {kind!r}")
    fields = set(data) - {"kind"}
    unknown = fields - _ALLOWED[kind]
    if unknown:
        raise ConfigError(f"unknown field(s) for kind {kind!r}: {', '.join(sorted(unknown))}")
    missing = _REQUIRED.get(kind, set()) - fields
    if missing:
        raise ConfigError(f"missing field(s) for kind {kind!r}: {', '.join(sorted(missing))}")
    if kind == "imperfect":
        coeff_fields = fields & {"a0", "a1", "b0", "b1"}
        if "delta" in fields and coeff_fields:
            raise ConfigError("imperfect: give either delta or a0, a1, b0, b1, not both")
        if coeff_fields and coeff_fields != {"a0", "a1", "b0", "b1"}:
            raise ConfigError("imperfect: a0, a1, b0, b1 must be given together")
    norms = data.get("ancilla_norms", {})
    overlaps = data.get("cross_overlaps", {})
    if not isinstance(norms, dict) or not isinstance(overlaps, dict):
        raise ConfigError("ancilla_norms and cross_overlaps must be objects")
    bad = set(norms) - {"A0", "A1", "B0", "B1", "C0", "C1"}
    bad |= set(overlaps) - {"C1B0", "B1C0"}
    if bad:
        raise ConfigError(f"unknown ancilla key(s): {', '.join(sorted(bad))}")
    return MachineConfig(
        kind=kind,
        xi=_real("xi", data["xi"]) if "xi" in data else None,
        sigma_theta=_real("sigma_theta", data.get("sigma_theta", 0.0)),
        delta=_real("delta", data["delta"]) if "delta" in data else None,
        coeffs={k: _complex(k, data[k]) for k in sorted(fields & _COMPLEX)},
        ancilla_norms={k: _real(k, v) for k, v in norms.items()},
        cross_overlaps={k: _complex(k, v) for k, v in overlaps.items()},
    )


def load_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc


def config_to_dict(cfg: MachineConfig) -> dict:
    out: dict = {"kind": cfg.kind}
    if cfg.xi is not None:
        out["xi"] = cfg.xi
    if cfg.delta is not None:
        out["delta"] = cfg.delta
    for k, v in cfg.coeffs.items():
        out[k] = [v.real, v.imag]
    if cfg.ancilla_norms:
        out["ancilla_norms"] = dict(cfg.ancilla_norms)
    if cfg.cross_overlaps:
        out["cross_overlaps"] = {k: [v.real, v.imag] for k, v in cfg.cross_overlaps.items()}
    if cfg.kind != "wz" and cfg.kind != "bh":
        out["sigma_theta"] = cfg.sigma_theta
    return out


def imperfect_params(cfg: MachineConfig) -> ImperfectDeleterParams:
    if cfg.delta is not None:
        return ImperfectDeleterParams.from_delta(cfg.delta, cfg.sigma_theta)
    if cfg.coeffs:
        c = cfg.coeffs
        return ImperfectDeleterParams(c["a0"], c["a1"], c["b0"], c["b1"], cfg.sigma_theta)
    return ImperfectDeleterParams.symmetric_example(cfg.sigma_theta)


def build_machine(cfg: MachineConfig, check: bool = True) -> MachineSpec:
    """Instantiate the machine a config describes."""
    if cfg.kind == "wz":
        return wz_machine()
    if cfg.kind == "bh":
        return bh_machine(1.0 / 6.0 if cfg.xi is None else cfg.xi)
    sigma = sigma_from_theta(cfg.sigma_theta)
    if cfg.kind == "pb":
        return pb_delete_machine(sigma)
    if cfg.kind == "imperfect":
        return imperfect_delete_machine(imperfect_params(cfg), check=check)
    c = cfg.coeffs
    if cfg.kind == "general":
        params = GeneralDeleterParams(
            c["a0"], c["a1"], c["b0"], c["b1"],
            c.get("p0", 0j), c.get("p1", 0j),
            cfg.ancilla_norms, cfg.cross_overlaps, cfg.sigma_theta,
        )
        return general_delete_machine(params, sigma, check=check)
    return qiu_machine(c["a0"], c["b0"], c["a1"], c["b1"], sigma, check=check)
