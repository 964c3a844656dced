from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from .field import _prime_power


class Variant(str, Enum):
    MMC = "mmc"
    AMC = "amc"
    AMMC = "ammc"
    GENERAL = "general"


@dataclass(frozen=True)
class ChannelParams:
    """A (q, n, m, t) matrix channel: n packets of m symbols over GF(q),
    with at most t injected error packets."""

    q: int
    n: int
    m: int
    t: int = 0

    def __post_init__(self):
        _prime_power(self.q)
        if self.n < 0 or self.m < 0 or self.t < 0:
            raise ValueError(f"dimensions must be non-negative: {self}")
        if self.t > self.n:
            raise ValueError(f"t={self.t} exceeds n={self.n}")

    @property
    def lam(self) -> float | None:
        return self.n / self.m if self.m else None

    @property
    def tau(self) -> float | None:
        return self.t / self.n if self.n else None

    def as_dict(self) -> dict:
        return asdict(self)
