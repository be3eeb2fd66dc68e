"""Degree-of-freedom fluid model of star-topology coded broadcast.

The population state is the survival function F = (F_0, …, F_k), where
F_i(s) is the fraction of target nodes holding at least i degrees of freedom
after round s.  One source serves m targets with total bandwidth alpha shards
per round over links of success probability p1, so a node draws a fresh
useful shard with probability c1 = min(p1 · alpha / m, 1) per round.  In the
peer-assisted regime each node additionally pulls a recoded shard from one
uniformly random peer (link success p2); a puller at dimension i − 1 meets a
strictly-more-knowledgeable donor with probability F_i, giving the per-round
transition probability c1 + p2 · F_i for the slice G_i = F_{i-1} − F_i.

Both regimes advance synchronously: every right-hand side is evaluated on
the round-s state.  The total transition coefficient is clamped to 1 so it
stays a probability even when c1 + p2 · F_i exceeds 1 (e.g. alpha > m); the
clamp also preserves the ordering F_i ≥ F_{i+1} from every valid state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

NO_TURBO = "no_turbo"
PEER_TURBO = "peer_turbo"
REGIMES = (NO_TURBO, PEER_TURBO)


@dataclass(frozen=True)
class FluidParams:
    """Scalar model parameters; dt only converts rounds to seconds for reporting."""

    m: int
    k: int
    alpha: float
    p1: float
    p2: float
    dt: float = 1.0
    regime: str = NO_TURBO

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")

    @property
    def c1(self) -> float:
        """Per-node per-round source delivery probability, clamped to 1."""
        return min(self.p1 * self.alpha / self.m, 1.0)

    def with_regime(self, regime: str) -> "FluidParams":
        return replace(self, regime=regime)


@dataclass(frozen=True)
class SurvivalState:
    """F_0 … F_k at one round; F_0 = 1 and F is non-increasing in i."""

    step: int
    F: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.F, dtype=np.float64).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "F", arr)

    @property
    def k(self) -> int:
        return self.F.shape[0] - 1


def init_state(params: FluidParams) -> SurvivalState:
    """All mass at dimension zero: F = (1, 0, …, 0)."""
    F = np.zeros(params.k + 1)
    F[0] = 1.0
    return SurvivalState(step=0, F=F)


def _advance(F: np.ndarray, c1: float, p2: float) -> np.ndarray:
    head = F[:-1]
    tail = F[1:]
    coeff = np.minimum(c1 + p2 * tail, 1.0)
    out = np.empty_like(F)
    out[0] = 1.0
    out[1:] = np.minimum(tail + coeff * (head - tail), 1.0)
    return out


def step_no_turbo(state: SurvivalState, params: FluidParams) -> SurvivalState:
    """Source-only update: F_i += c1 · (F_{i-1} − F_i), capped at 1."""
    return SurvivalState(step=state.step + 1, F=_advance(state.F, params.c1, 0.0))


def step_peer_turbo(state: SurvivalState, params: FluidParams) -> SurvivalState:
    """Peer-assisted update: F_i += min(c1 + p2 · F_i, 1) · (F_{i-1} − F_i), capped at 1."""
    return SurvivalState(step=state.step + 1, F=_advance(state.F, params.c1, params.p2))


_STEPPERS = {NO_TURBO: step_no_turbo, PEER_TURBO: step_peer_turbo}


class Trajectory:
    """A fluid run: states 0 … horizon as a (horizon+1) × (k+1) matrix.

    Indexing yields :class:`SurvivalState` values; ``survival(i)`` returns the
    F_i time series used by quorum and width metrics.
    """

    def __init__(self, params: FluidParams, F: np.ndarray) -> None:
        self.params = params
        F = np.asarray(F, dtype=np.float64)
        F.setflags(write=False)
        self.F = F

    @property
    def horizon(self) -> int:
        return self.F.shape[0] - 1

    @property
    def k(self) -> int:
        return self.F.shape[1] - 1

    def survival(self, dim: int) -> np.ndarray:
        """F_dim(s) for s = 0 … horizon."""
        return self.F[:, dim]

    def __len__(self) -> int:
        return self.F.shape[0]

    def __getitem__(self, step: int) -> SurvivalState:
        return SurvivalState(step=range(len(self))[step], F=self.F[step])

    def __iter__(self) -> Iterator[SurvivalState]:
        for s in range(len(self)):
            yield self[s]

    def __repr__(self) -> str:
        return f"Trajectory(regime={self.params.regime}, k={self.k}, horizon={self.horizon})"


def run(params: FluidParams, horizon: int) -> Trajectory:
    """Apply the regime's step ``horizon`` times from the initial state."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    stepper = _STEPPERS[params.regime]
    out = np.empty((horizon + 1, params.k + 1))
    state = init_state(params)
    out[0] = state.F
    for s in range(horizon):
        state = stepper(state, params)
        out[s + 1] = state.F
    return Trajectory(params, out)
