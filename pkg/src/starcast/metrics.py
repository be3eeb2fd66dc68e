"""Quorum, transition-width, and deviation metrics over survival surfaces.

All functions accept either a fluid :class:`~starcast.fluid.Trajectory` or a
Monte Carlo :class:`~starcast.mc.EnsembleSurvival`; both expose ``survival(i)``
time series and a (k+1) × (horizon+1) surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from starcast.fluid import NO_TURBO, PEER_TURBO, FluidParams, Trajectory, run


@dataclass(frozen=True)
class QuorumResult:
    """First round at which F_k ≥ phi; 'unreached' is explicit, never a sentinel."""

    phi: float
    reached: bool
    steps: int | None = None
    seconds: float | None = None


def _surface(obj) -> np.ndarray:
    """Normalize to a (dims, steps) survival matrix."""
    if isinstance(obj, Trajectory):
        return obj.F.T
    mean = getattr(obj, "mean_F", None)
    if mean is not None:
        return np.asarray(mean)
    if isinstance(obj, np.ndarray):
        return obj
    raise TypeError(f"expected Trajectory, EnsembleSurvival, or array, got {type(obj).__name__}")


def _resolve_dt(obj, dt: float | None) -> float:
    if dt is not None:
        return dt
    params = getattr(obj, "params", None)
    return params.dt if params is not None else 1.0


def quorum_time(traj, phi: float, dim: int | None = None, dt: float | None = None) -> QuorumResult:
    """Smallest step s with F_dim(s) ≥ phi (dim defaults to k)."""
    if not 0.0 < phi <= 1.0:
        raise ValueError("phi must be in (0, 1]")
    if dim is None:
        dim = traj.k
    series = traj.survival(dim)
    hits = np.flatnonzero(series >= phi)
    if hits.size == 0:
        return QuorumResult(phi=phi, reached=False)
    steps = int(hits[0])
    return QuorumResult(phi=phi, reached=True, steps=steps, seconds=steps * _resolve_dt(traj, dt))


def transition_width(traj, dim: int, lo: float, hi: float) -> int | None:
    """(first s with F_dim ≥ hi) − (first s with F_dim ≥ lo); None if hi unreached."""
    if not (0.0 < lo < hi < 1.0):
        raise ValueError("need 0 < lo < hi < 1")
    series = traj.survival(dim)
    hi_hits = np.flatnonzero(series >= hi)
    if hi_hits.size == 0:
        return None
    lo_hits = np.flatnonzero(series >= lo)
    return int(hi_hits[0]) - int(lo_hits[0])


def sup_norm_deviation(a, b) -> float:
    """max over (i, s) of |F_i^a(s) − F_i^b(s)|; symmetric in its arguments."""
    sa = _surface(a)
    sb = _surface(b)
    if sa.shape != sb.shape:
        raise ValueError(f"shape mismatch: {sa.shape} vs {sb.shape}")
    return float(np.abs(sa - sb).max())


def diff_surface(traj_a, traj_b) -> np.ndarray:
    """Matrix with entry (i, s) = F_i^b(s) − F_i^a(s)."""
    sa = _surface(traj_a)
    sb = _surface(traj_b)
    if sa.shape != sb.shape:
        raise ValueError(f"shape mismatch: {sa.shape} vs {sb.shape}")
    return sb - sa


@dataclass(frozen=True)
class QuorumTableRow:
    """One sweep result with full parameter provenance."""

    params: FluidParams
    result: QuorumResult


def quorum_table(
    grid: Iterable[FluidParams] | Sequence[FluidParams], phi: float, horizon: int
) -> list[QuorumTableRow]:
    """Run both regimes at every grid point and extract quorum times."""
    points = list(grid)
    if not points:
        raise ValueError("parameter grid is empty")
    rows: list[QuorumTableRow] = []
    for point in points:
        for regime in (NO_TURBO, PEER_TURBO):
            params = point.with_regime(regime)
            traj = run(params, horizon)
            rows.append(QuorumTableRow(params=params, result=quorum_time(traj, phi)))
    return rows
