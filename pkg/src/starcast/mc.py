"""Packet-level Monte Carlo simulation of star-topology coded broadcast.

Each trial simulates m receiver nodes over synchronous rounds with real
coded shards.  Per round:

* Source phase — under ``bernoulli_fluid`` every node independently receives
  a fresh source shard with probability min(p1 · alpha / m, 1); under
  ``integer_schedule`` the source emits round(alpha) shards to uniformly
  random targets (with replacement), each surviving its link with
  probability p1.
* Peer phase (peer_turbo regime, m > 1) — every node pulls from one
  uniformly random other node; the pull succeeds with probability p2 and
  delivers a shard recoded from the donor's start-of-round state, provided
  the donor holds at least one degree of freedom.  Under the
  ``conservative`` rule a delivered shard is discarded unless the donor's
  start-of-round rank strictly exceeds the receiver's; under ``rlnc_exact``
  it is always absorbed and Gaussian elimination decides innovativeness.

All deliveries are generated from start-of-round states and absorbed at
round end (source shards first, then peer shards), so a node can gain up to
two degrees of freedom per round — one from each phase.  With integer
scheduling a node may additionally receive several source shards in one
round.

Randomness discipline: counter-based Philox streams keyed by
(seed, trial, round, channel) with channels {source, peer-select, peer-loss,
coefficients}; within a channel, draws are indexed by node position.
Coefficients are consumed as fixed-width blocks — one k-wide row per
delivered shard, source deliveries first, then peer deliveries in receiver
order, resampling any row whose leading ``rank`` entries are all zero.  This
makes every trial a pure function of (seed, trial_index), makes p2 = 0
peer_turbo runs bit-identical to no_turbo runs, and keeps the conservative
and rlnc_exact rules fed with identical delivered shards under a shared
seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from starcast import _kernels
from starcast.fluid import PEER_TURBO, FluidParams
from starcast.galois import get_field
from starcast.rlnc import CodedShard, DecoderState, Payload
from starcast.rlnc import absorb as _absorb_shard

SOURCE_POLICIES = ("bernoulli_fluid", "integer_schedule")
PEER_RULES = ("conservative", "rlnc_exact")

_CH_SOURCE, _CH_PEER_SELECT, _CH_PEER_LOSS, _CH_COEFF, _CH_PAYLOAD = range(5)
_MAX_TRIAL = 1 << 32
_MAX_ROUND = 1 << 29


@dataclass(frozen=True)
class McConfig:
    fluid: FluidParams
    q: int = 256
    l: int = 32
    trials: int = 1
    seed: int = 0
    source_policy: str = "bernoulli_fluid"
    peer_rule: str = "conservative"
    horizon: int = 0

    def __post_init__(self) -> None:
        get_field(self.q)
        if self.l < 1:
            raise ValueError("l must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.trials <= _MAX_TRIAL:
            raise ValueError("trials out of range")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.source_policy not in SOURCE_POLICIES:
            raise ValueError(f"source_policy must be one of {SOURCE_POLICIES}")
        if self.peer_rule not in PEER_RULES:
            raise ValueError(f"peer_rule must be one of {PEER_RULES}")
        if not 0 <= self.horizon < _MAX_ROUND:
            raise ValueError("horizon must be >= 0")


@dataclass(frozen=True)
class NodeState:
    """One receiver: its decoder plus a count of successful deliveries."""

    decoder: DecoderState
    receptions: int = 0


def _stream(seed: int, trial: int, rnd: int, channel: int) -> Generator:
    word = (trial << 32) | (rnd << 3) | channel
    return Generator(Philox(key=np.array([seed, word], dtype=np.uint64)))


@dataclass(frozen=True)
class RoundStreams:
    """The four per-round random channels.

    ``for_round`` keys them independently per (seed, trial, round);
    ``shared`` aliases a single generator for all channels, for standalone
    ``run_round`` use.
    """

    source: Generator
    peer_select: Generator
    peer_loss: Generator
    coeffs: Generator

    @classmethod
    def for_round(cls, seed: int, trial: int, rnd: int) -> "RoundStreams":
        return cls(
            source=_stream(seed, trial, rnd, _CH_SOURCE),
            peer_select=_stream(seed, trial, rnd, _CH_PEER_SELECT),
            peer_loss=_stream(seed, trial, rnd, _CH_PEER_LOSS),
            coeffs=_stream(seed, trial, rnd, _CH_COEFF),
        )

    @classmethod
    def shared(cls, rng: Generator) -> "RoundStreams":
        return cls(source=rng, peer_select=rng, peer_loss=rng, coeffs=rng)


def trial_payload(cfg: McConfig, trial_index: int) -> Payload:
    """The random payload used by trial ``trial_index`` (a pure function of cfg.seed)."""
    rng = _stream(cfg.seed, trial_index, 0, _CH_PAYLOAD)
    data = rng.integers(0, cfg.q, size=(cfg.fluid.k, cfg.l), dtype=np.uint8)
    return Payload(data, q=cfg.q)


def _source_deliveries(streams: RoundStreams, cfg: McConfig) -> np.ndarray:
    """Receiver indices of this round's delivered source shards, in draw order."""
    p = cfg.fluid
    g = streams.source
    if cfg.source_policy == "bernoulli_fluid":
        u = g.random(p.m)
        return np.flatnonzero(u < p.c1)
    n_emit = int(round(p.alpha))
    targets = g.integers(0, p.m, size=n_emit)
    losses = g.random(n_emit)
    return targets[losses < p.p1]


def _peer_contacts(streams: RoundStreams, cfg: McConfig) -> tuple[np.ndarray, np.ndarray]:
    """(donor index per node, link-success mask per node)."""
    p = cfg.fluid
    raw = streams.peer_select.integers(0, p.m - 1, size=p.m)
    donors = raw + (raw >= np.arange(p.m))
    u = streams.peer_loss.random(p.m)
    return donors, u < p.p2


def _coeff_block(
    rng: Generator, count: int, k: int, q: int, valid_width: np.ndarray | None = None
) -> np.ndarray:
    """Draw a (count, k) coefficient block, one row per delivered shard.

    Row i is resampled (full k-wide redraw) while its leading
    ``valid_width[i]`` entries — all k when no widths are given — are all
    zero, so every shard built from the block is nonzero.
    """
    block = rng.integers(0, q, size=(count, k), dtype=np.uint8)
    if count == 0:
        return block
    if valid_width is None:
        mask = np.ones((count, k), dtype=bool)
    else:
        mask = np.arange(k)[None, :] < np.asarray(valid_width)[:, None]
    while True:
        bad = ~((block != 0) & mask).any(axis=1)
        if not bad.any():
            return block
        idx = np.flatnonzero(bad)
        block[idx] = rng.integers(0, q, size=(idx.size, k), dtype=np.uint8)


def _recode_from(decoder: DecoderState, alphas: np.ndarray, mul: np.ndarray) -> CodedShard:
    out = np.empty(decoder.k + decoder.l, dtype=np.uint8)
    _kernels.recode_row(decoder._basis, decoder._present, alphas, out, mul)
    return CodedShard(out[: decoder.k], out[decoder.k :], q=decoder.q)


def run_round(
    nodes: list[NodeState],
    payload: Payload,
    cfg: McConfig,
    rng: Generator | RoundStreams,
) -> list[NodeState]:
    """Advance one synchronous round; returns the new node list.

    This is the object-level reference path; ``run_trial`` implements the
    same semantics on flat arrays and is checked against it bit for bit.
    """
    p = cfg.fluid
    if len(nodes) != p.m:
        raise ValueError(f"expected {p.m} nodes, got {len(nodes)}")
    streams = rng if isinstance(rng, RoundStreams) else RoundStreams.shared(rng)
    field = get_field(cfg.q)
    k, l = p.k, cfg.l
    start_rank = np.array([n.decoder.rank for n in nodes], dtype=np.int64)

    recv_src = _source_deliveries(streams, cfg)
    src_coeffs = _coeff_block(streams.coeffs, recv_src.size, k, cfg.q)

    peer_active = p.regime == PEER_TURBO and p.m > 1
    recv_peer = np.empty(0, dtype=np.int64)
    peer_donor = np.empty(0, dtype=np.int64)
    peer_alphas = np.empty((0, k), dtype=np.uint8)
    if peer_active:
        donors, link_ok = _peer_contacts(streams, cfg)
        delivered = link_ok & (start_rank[donors] >= 1)
        recv_peer = np.flatnonzero(delivered)
        peer_donor = donors[recv_peer]
        peer_alphas = _coeff_block(
            streams.coeffs, recv_peer.size, k, cfg.q, valid_width=start_rank[peer_donor]
        )

    decoders = [n.decoder for n in nodes]
    receptions = [n.receptions for n in nodes]
    new_decoders = list(decoders)

    row = np.empty(k + l, dtype=np.uint8)
    for i, n in enumerate(recv_src):
        _kernels.encode_row(src_coeffs[i], payload.data, row, field.mul_table)
        shard = CodedShard(row[:k], row[k:], q=cfg.q)
        new_decoders[n], _ = _absorb_shard(new_decoders[n], shard)
        receptions[n] += 1

    for i, n in enumerate(recv_peer):
        shard = _recode_from(decoders[peer_donor[i]], peer_alphas[i], field.mul_table)
        receptions[n] += 1
        if cfg.peer_rule == "conservative" and start_rank[peer_donor[i]] <= start_rank[n]:
            continue
        new_decoders[n], _ = _absorb_shard(new_decoders[n], shard)

    return [NodeState(decoder=d, receptions=r) for d, r in zip(new_decoders, receptions)]


def initial_nodes(cfg: McConfig) -> list[NodeState]:
    """m empty decoders for driving run_round by hand."""
    p = cfg.fluid
    return [NodeState(DecoderState(p.k, cfg.l, q=cfg.q)) for _ in range(p.m)]


def _simulate_trial(cfg: McConfig, trial_index: int):
    """Fast-path trial: returns (rank history, receptions, gap deliveries, gap non-innovative)."""
    p = cfg.fluid
    m, k, l, q = p.m, p.k, cfg.l, cfg.q
    field = get_field(q)
    mul, inv = field.mul_table, field.inv_table
    data = trial_payload(cfg, trial_index).data

    basis = np.zeros((m, k, k + l), dtype=np.uint8)
    present = np.zeros((m, k), dtype=np.bool_)
    rank = np.zeros(m, dtype=np.int64)
    receptions = np.zeros(m, dtype=np.int64)
    ranks_hist = np.zeros((m, cfg.horizon + 1), dtype=np.int64)
    gap_deliveries = 0
    gap_noninnovative = 0
    peer_active = p.regime == PEER_TURBO and m > 1
    conservative = cfg.peer_rule == "conservative"

    for s in range(cfg.horizon):
        streams = RoundStreams.for_round(cfg.seed, trial_index, s)
        start_rank = rank.copy()

        recv_src = _source_deliveries(streams, cfg)
        src_coeffs = _coeff_block(streams.coeffs, recv_src.size, k, q)

        if peer_active:
            donors, link_ok = _peer_contacts(streams, cfg)
            delivered = link_ok & (start_rank[donors] >= 1)
            recv_peer = np.flatnonzero(delivered)
            peer_donor = donors[recv_peer]
            peer_alphas = _coeff_block(
                streams.coeffs, recv_peer.size, k, q, valid_width=start_rank[peer_donor]
            )
            basis_snap = basis.copy()
            present_snap = present.copy()

        if recv_src.size:
            rows = np.empty((recv_src.size, k + l), dtype=np.uint8)
            _kernels.encode_rows(src_coeffs, data, rows, mul)
            flags = np.empty(recv_src.size, dtype=np.bool_)
            _kernels.absorb_rows(basis, present, rank, rows, recv_src, flags, mul, inv)
            np.add.at(receptions, recv_src, 1)

        if peer_active and recv_peer.size:
            rows = np.empty((recv_peer.size, k + l), dtype=np.uint8)
            _kernels.recode_rows(basis_snap, present_snap, peer_donor, peer_alphas, rows, mul)
            gap_mask = start_rank[peer_donor] > start_rank[recv_peer]
            if conservative:
                sel = np.flatnonzero(gap_mask)
                flags = np.empty(sel.size, dtype=np.bool_)
                _kernels.absorb_rows(basis, present, rank, rows[sel], recv_peer[sel], flags, mul, inv)
                gap_deliveries += int(sel.size)
                gap_noninnovative += int(sel.size - np.count_nonzero(flags))
            else:
                flags = np.empty(recv_peer.size, dtype=np.bool_)
                _kernels.absorb_rows(basis, present, rank, rows, recv_peer, flags, mul, inv)
                gap_deliveries += int(np.count_nonzero(gap_mask))
                gap_noninnovative += int(np.count_nonzero(gap_mask & ~flags))
            receptions[recv_peer] += 1

        ranks_hist[:, s + 1] = rank

    return ranks_hist, receptions, gap_deliveries, gap_noninnovative


def run_trial(cfg: McConfig, trial_index: int) -> np.ndarray:
    """Every node's rank after every round, as an m × (horizon+1) matrix.

    Fully deterministic given (cfg.seed, trial_index).
    """
    if not 0 <= trial_index < _MAX_TRIAL:
        raise ValueError("trial_index out of range")
    ranks_hist, _, _, _ = _simulate_trial(cfg, trial_index)
    return ranks_hist


def _survival_from_ranks(ranks_hist: np.ndarray, k: int) -> np.ndarray:
    """Empirical survival surface: entry (i, s) = fraction of nodes with rank ≥ i."""
    m, cols = ranks_hist.shape
    out = np.empty((k + 1, cols))
    for s in range(cols):
        counts = np.bincount(ranks_hist[:, s], minlength=k + 1)
        out[:, s] = counts[::-1].cumsum()[::-1] / m
    return out


@dataclass(frozen=True)
class EnsembleSurvival:
    """Trial-averaged survival surface with per-cell standard errors.

    ``higher_rank_deliveries`` counts recoded deliveries whose donor had
    strictly larger start-of-round rank than the receiver, and
    ``higher_rank_noninnovative`` how many of those were non-innovative —
    the empirical counterpart of the q^-gap innovation bound.
    """

    mean_F: np.ndarray
    stderr_F: np.ndarray
    trials: int
    higher_rank_deliveries: int
    higher_rank_noninnovative: int
    trial_F_k: np.ndarray

    @property
    def k(self) -> int:
        return self.mean_F.shape[0] - 1

    @property
    def horizon(self) -> int:
        return self.mean_F.shape[1] - 1

    def survival(self, dim: int) -> np.ndarray:
        return self.mean_F[dim]

    def trial_quorum_steps(self, phi: float) -> list[int | None]:
        """Per-trial first step with F_k ≥ phi (None where unreached)."""
        if not 0.0 < phi <= 1.0:
            raise ValueError("phi must be in (0, 1]")
        out: list[int | None] = []
        for series in self.trial_F_k:
            hits = np.flatnonzero(series >= phi)
            out.append(int(hits[0]) if hits.size else None)
        return out


def run_ensemble(cfg: McConfig) -> EnsembleSurvival:
    """Average the empirical survival function over cfg.trials independent trials."""
    p = cfg.fluid
    per_trial = np.empty((cfg.trials, p.k + 1, cfg.horizon + 1))
    gap_deliveries = 0
    gap_noninnovative = 0
    for t in range(cfg.trials):
        ranks_hist, _, gd, gn = _simulate_trial(cfg, t)
        per_trial[t] = _survival_from_ranks(ranks_hist, p.k)
        gap_deliveries += gd
        gap_noninnovative += gn
    mean = per_trial.mean(axis=0)
    if cfg.trials > 1:
        stderr = per_trial.std(axis=0, ddof=1) / math.sqrt(cfg.trials)
    else:
        stderr = np.zeros_like(mean)
    return EnsembleSurvival(
        mean_F=mean,
        stderr_F=stderr,
        trials=cfg.trials,
        higher_rank_deliveries=gap_deliveries,
        higher_rank_noninnovative=gap_noninnovative,
        trial_F_k=per_trial[:, p.k, :].copy(),
    )
