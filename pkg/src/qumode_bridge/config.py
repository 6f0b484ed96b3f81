"""Line-oriented ``key = value`` experiment configuration."""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ValidationError


def _ints(v):
    return tuple(int(s) for s in v)


def _floats(v):
    return tuple(float(s) for s in v)


@dataclass(frozen=True)
class ExperimentConfig:
    """All keys are optional.  List-valued keys take comma-separated values.

    ``sigma_factor`` sets the Gaussian width as ``sigma_factor * L / sqrt(mu)``
    unless ``sigma`` is given explicitly.
    """

    experiment: str = ""
    n_q: tuple[int, ...] = (7,)
    mu: float = 1.0
    n_b: int = 30
    fock: tuple[int, ...] = (0,)
    eps: tuple[float, ...] = (1e-4,)
    sigma: float | None = None
    sigma_factor: float = 0.5
    kinds: tuple[str, ...] = ("rectangular", "gaussian")
    oversample: int = 16
    seed: int = 42
    output: str = "results"
    p_points: int = 201
    success_points: int = 256
    criterion: str = "distance"
    r_min: float = 1e-3
    r_max: float = 1.0
    r_points: int = 13
    squeeze_qubits: int = 9
    squeeze_cutoff: int = 50
    n_q_min: int = 1
    n_q_max: int = 12
    oracle_max_qubits: int = 5
    n_q_target: int = 7

    @property
    def sigma_for(self):
        """Callable ``grid -> sigma`` for the Gaussian initial state."""
        if self.sigma is not None:
            return lambda grid: self.sigma
        return lambda grid: self.sigma_factor * grid.L / grid.mu**0.5


_CONVERT = {
    "experiment": str, "mu": float, "n_b": int, "sigma": float, "sigma_factor": float,
    "oversample": int, "seed": int, "output": str, "p_points": int, "success_points": int,
    "criterion": str, "r_min": float, "r_max": float, "r_points": int,
    "squeeze_qubits": int, "squeeze_cutoff": int, "n_q_min": int, "n_q_max": int,
    "oracle_max_qubits": int, "n_q_target": int,
}
_LISTS = {"n_q": _ints, "fock": _ints, "eps": _floats,
          "kinds": lambda v: tuple(s.strip() for s in v)}


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment, unknown keys are rejected."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ValidationError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValidationError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _LISTS:
                items = [s.strip() for s in val.split(",") if s.strip()]
                if not items:
                    raise ValueError("empty list")
                values[key] = _LISTS[key](items)
            else:
                values[key] = _CONVERT[key](val)
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    cfg = ExperimentConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.mu <= 0:
        raise ValidationError("mu must be positive")
    if any(not 0 < e < 1 for e in cfg.eps):
        raise ValidationError("eps values must lie in (0, 1)")
    if any(n < 0 for n in cfg.fock):
        raise ValidationError("Fock orders must be non-negative")
    if cfg.criterion not in ("distance", "fidelity"):
        raise ValidationError("criterion must be 'distance' or 'fidelity'")
    bad = set(cfg.kinds) - {"rectangular", "gaussian"}
    if bad:
        raise ValidationError(f"unknown initial-state kinds {sorted(bad)}")
    if not 0 < cfg.r_min <= cfg.r_max:
        raise ValidationError("need 0 < r_min <= r_max")


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"config file {p} not found")
    return parse_config(p.read_text())
