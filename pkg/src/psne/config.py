from __future__ import annotations

import math
from dataclasses import dataclass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PsneConfig:
    """Tunables of the embedding pipeline.

    Defaults are the PPI settings (alpha=0.35, T=10, c=25, mu=10).  The
    number of path samples is ``N = c * T * m``.
    """

    alpha: float = 0.35
    T: int = 10
    c: float = 25.0
    mu: float = 10.0
    k: int = 128
    seed: int = 0
    threads: int = 1
    s_cap: int = 8
    oversample: int = 10
    power_iters: int = 8

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.T) != self.T or self.T < 1:
            raise ConfigError(f"T must be an integer >= 1, got {self.T}")
        if not (self.c >= 1.0 and math.isfinite(self.c)):
            raise ConfigError(f"c must be >= 1, got {self.c}")
        if not (self.mu > 0.0 and math.isfinite(self.mu)):
            raise ConfigError(f"mu must be > 0, got {self.mu}")
        for name in ("k", "threads", "s_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.oversample < 0 or self.power_iters < 0:
            raise ConfigError("oversample and power_iters must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @property
    def alpha_sum(self) -> float:
        return alpha_sum(self.alpha, self.T)

    def n_samples(self, m: int) -> int:
        return max(1, int(round(self.c * self.T * m)))

    def check_graph(self, n: int) -> None:
        if self.k > n:
            raise ConfigError(f"embedding dimension k={self.k} exceeds node count {n}")


def alpha_sum(alpha: float, T: int) -> float:
    """``sum_{i=1..T} alpha (1-alpha)^i`` in closed form."""
    return (1.0 - alpha) * (1.0 - (1.0 - alpha) ** T)
