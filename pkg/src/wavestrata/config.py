"""Flat key = value experiment configuration.

The format is one ``key = value`` assignment per line, ``#`` starts a
comment, blank lines are ignored.  Recognized keys and defaults:

    rho = 1.7320508075688772   # Klein-Gordon parameter (> 0)
    eps = 1e-3                 # initial first-mode energy (> 0)
    M = 32                     # spectral degree (modes -M..M-1)
    tau = 0.05                 # time step-size (> 0)
    filter = deuflhard         # filter pair name (deuflhard | mollified_impulse)
    n_steps = 20000            # number of time steps (>= 0)
    sample_stride = 10         # energy sampling stride (>= 1)
    K = 6                      # truncation parameter (3 <= K <= M)
    s = 1.0                    # Sobolev weight exponent
    nu = 0.0                   # slow-time exponent, in [0, 1/2)
    m_max = 2                  # expansion truncation order (1..2K-1)
    seed = 0                   # RNG seed (recorded; reproduction runs use none)
    out = trace.csv            # output path
    require_nonresonant = 0    # refuse resonant step-sizes when 1
    window_max = 0             # windowed-max postprocessing width (0 = off)
"""

from __future__ import annotations

from dataclasses import dataclass, fields


class ConfigError(ValueError):
    """Invalid configuration file or parameter value."""


@dataclass
class ExperimentConfig:
    rho: float = 1.7320508075688772
    eps: float = 1e-3
    M: int = 32
    tau: float = 0.05
    filter: str = "deuflhard"
    n_steps: int = 20000
    sample_stride: int = 10
    K: int = 6
    s: float = 1.0
    nu: float = 0.0
    m_max: int = 2
    seed: int = 0
    out: str = "trace.csv"
    require_nonresonant: int = 0
    window_max: int = 0

    def validate(self) -> "ExperimentConfig":
        if self.rho <= 0 or self.eps <= 0 or self.tau <= 0:
            raise ConfigError("rho, eps and tau must be positive")
        if self.M < 1 or self.n_steps < 0 or self.sample_stride < 1:
            raise ConfigError("M must be >= 1, n_steps >= 0, sample_stride >= 1")
        if not (3 <= self.K <= self.M):
            raise ConfigError(f"need 3 <= K <= M, got K={self.K}, M={self.M}")
        if not (0.0 <= self.nu < 0.5):
            raise ConfigError(f"nu must lie in [0, 1/2), got {self.nu}")
        if not (1 <= self.m_max <= 2 * self.K - 1):
            raise ConfigError(f"m_max must lie in 1..2K-1, got {self.m_max}")
        if self.window_max < 0:
            raise ConfigError("window_max must be >= 0")
        return self

    def to_text(self) -> str:
        lines = [f"{f.name} = {getattr(self, f.name)}" for f in fields(self)]
        return "\n".join(lines) + "\n"


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = base or ExperimentConfig()
    types = {f.name: f.type for f in fields(ExperimentConfig)}
    casts = {"int": int, "float": float, "str": str}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            setattr(cfg, key, casts[types[key]](value))
        except ValueError as err:
            raise ConfigError(f"line {lineno}: bad value for {key}: {err}") from err
    return cfg.validate()


def load_config(path: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base=base)
