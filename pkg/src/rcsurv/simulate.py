"""Synthetic right-censored samples from independent failure and censoring laws.

Random numbers come from numpy's PCG64 generator.  A configuration seed feeds
a :class:`numpy.random.SeedSequence` which is split into two child streams,
the first for failure times and the second for censoring times, so that the
two draws never share generator state.  Discrete laws return exact support
points, so failure and censoring draws tie exactly whenever they land on the
same atom.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .core import CensoredSample, StepFunction, validate_sample

RNG_NAME = "numpy.PCG64/SeedSequence.spawn(2)"


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValueError(f"exponential rate must be positive, got {self.rate!r}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, size=n)

    def survival(self, t):
        return np.exp(-self.rate * np.asarray(t, dtype=float))

    def to_dict(self):
        return {"kind": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class DiscreteUniform:
    """Equal mass on each point of a finite, strictly increasing, positive support."""

    support: tuple[float, ...]

    def __post_init__(self):
        s = tuple(float(v) for v in self.support)
        if not s:
            raise ValueError("discrete support must be nonempty")
        if s[0] <= 0 or any(b <= a for a, b in zip(s, s[1:])) or not all(map(math.isfinite, s)):
            raise ValueError("discrete support must be finite, positive and strictly increasing")
        object.__setattr__(self, "support", s)

    def sample(self, rng, n):
        return np.asarray(self.support)[rng.integers(0, len(self.support), size=n)]

    def survival_function(self) -> StepFunction:
        k = len(self.support)
        return StepFunction(1.0, self.support, [(k - j - 1) / k for j in range(k)])

    def survival(self, t):
        return self.survival_function().eval(t)

    def to_dict(self):
        return {"kind": "discreteUniform", "support": list(self.support)}


@dataclass(frozen=True)
class GeometricGrid:
    """``grid_step * G`` with G geometric on {1, 2, ...}: P(G = k) = (1 - p)^(k-1) p."""

    success_prob: float
    grid_step: float

    def __post_init__(self):
        if not 0 < self.success_prob < 1:
            raise ValueError(f"successProb must lie in (0, 1), got {self.success_prob!r}")
        if not (self.grid_step > 0 and math.isfinite(self.grid_step)):
            raise ValueError(f"gridStep must be positive, got {self.grid_step!r}")

    def sample(self, rng, n):
        return rng.geometric(self.success_prob, size=n) * self.grid_step

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        h = self.grid_step
        # largest k with k*h <= t, using the same product that produced the atoms
        k = np.floor(t / h)
        k = np.where((k + 1) * h <= t, k + 1, k)
        k = np.where(k * h > t, k - 1, k)
        return (1.0 - self.success_prob) ** np.maximum(k, 0)

    def to_dict(self):
        return {"kind": "geometricGrid", "successProb": self.success_prob, "gridStep": self.grid_step}


LawSpec = Union[Exponential, DiscreteUniform, GeometricGrid]


def law_from_dict(d: dict) -> LawSpec:
    kind = d.get("kind")
    if kind == "exponential":
        return Exponential(float(d["rate"]))
    if kind == "discreteUniform":
        return DiscreteUniform(tuple(d["support"]))
    if kind == "geometricGrid":
        return GeometricGrid(float(d["successProb"]), float(d["gridStep"]))
    raise ValueError(f"unknown law kind {kind!r}")


@dataclass(frozen=True)
class SimConfig:
    failure_law: LawSpec
    censoring_law: LawSpec
    n: int
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        try:
            return cls(
                failure_law=law_from_dict(d["failureLaw"]),
                censoring_law=law_from_dict(d["censoringLaw"]),
                n=d["n"],
                seed=d.get("seed", 0),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed simulation config: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "failureLaw": self.failure_law.to_dict(),
            "censoringLaw": self.censoring_law.to_dict(),
            "n": self.n,
            "seed": self.seed,
        }

    def with_seed(self, seed: int) -> "SimConfig":
        return SimConfig(self.failure_law, self.censoring_law, self.n, seed)


def generate(config: SimConfig) -> CensoredSample:
    """Draw (X_i, D_i) with X = min(T, U) and D = I{T <= U}; bit-reproducible per seed."""
    t_seq, u_seq = np.random.SeedSequence(config.seed).spawn(2)
    t = config.failure_law.sample(np.random.Generator(np.random.PCG64(t_seq)), config.n)
    u = config.censoring_law.sample(np.random.Generator(np.random.PCG64(u_seq)), config.n)
    x = np.minimum(t, u)
    d = (t <= u).astype(int)
    return validate_sample(zip(x.tolist(), d.tolist()))


def true_survival(law: LawSpec) -> Callable[[float], float]:
    """Exact evaluator of P(T > t) under ``law``.

    A finite discrete law gives a :class:`~rcsurv.core.StepFunction`; the
    others give a vectorized callable.
    """
    if isinstance(law, DiscreteUniform):
        return law.survival_function()
    return law.survival
