"""Random linear network coding over GF(2) and GF(256).

Shards are linear combinations of the k original data shards; every coded
shard carries its coefficient vector with respect to those originals, so
recoded shards compose transparently no matter how many hops produced them.
A :class:`DecoderState` tracks the received subspace incrementally via
Gaussian elimination; its rank is the node's degrees of freedom, and rank k
suffices to decode.

The wire layout of a shard (``CodedShard.to_bytes``) is k coefficient bytes
followed by l symbol bytes, one byte per field element.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from starcast import _kernels
from starcast.galois import get_field


class InsufficientRankError(ValueError):
    """Decoding was attempted with fewer than k degrees of freedom."""

    def __init__(self, rank: int, k: int) -> None:
        self.rank = rank
        self.k = k
        super().__init__(f"insufficient degrees of freedom: rank {rank} < k = {k}")


def _as_elements(values, q: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.uint8)
    if q == 2 and arr.size and arr.max() > 1:
        raise ValueError(f"{name} contains elements outside GF(2)")
    return arr


@dataclass(frozen=True)
class Payload:
    """The k × l matrix of original data shards (rows x_1 … x_k)."""

    data: np.ndarray
    q: int = 256

    def __post_init__(self) -> None:
        get_field(self.q)  # validates q
        arr = _as_elements(self.data, self.q, "payload")
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("payload must be a k x l matrix with k >= 1, l >= 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def k(self) -> int:
        return self.data.shape[0]

    @property
    def l(self) -> int:
        return self.data.shape[1]

    @classmethod
    def random(cls, k: int, l: int, q: int = 256, rng: np.random.Generator | None = None) -> "Payload":
        rng = rng if rng is not None else np.random.default_rng()
        return cls(rng.integers(0, q, size=(k, l), dtype=np.uint8), q=q)


@dataclass(frozen=True)
class CodedShard:
    """A coded shard: coefficients w.r.t. the original data shards, plus symbols."""

    coeffs: np.ndarray
    symbols: np.ndarray
    q: int = 256

    def __post_init__(self) -> None:
        get_field(self.q)
        coeffs = _as_elements(self.coeffs, self.q, "coeffs")
        symbols = _as_elements(self.symbols, self.q, "symbols")
        if coeffs.ndim != 1 or symbols.ndim != 1:
            raise ValueError("coeffs and symbols must be one-dimensional")
        coeffs = coeffs.copy()
        symbols = symbols.copy()
        coeffs.setflags(write=False)
        symbols.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "symbols", symbols)

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]

    @property
    def l(self) -> int:
        return self.symbols.shape[0]

    def to_bytes(self) -> bytes:
        return self.coeffs.tobytes() + self.symbols.tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, k: int, l: int, q: int = 256) -> "CodedShard":
        if len(raw) != k + l:
            raise ValueError(f"expected {k + l} bytes, got {len(raw)}")
        buf = np.frombuffer(raw, dtype=np.uint8)
        return cls(buf[:k], buf[k:], q=q)


class DecoderState:
    """Incremental rank tracker for one receiver.

    Maintains the received subspace as a reduced row-echelon basis, stored
    pivot-indexed: internal row j, when present, is the basis row with pivot
    in coefficient column j.  The representation is canonical — states with
    equal spans compare equal.
    """

    __slots__ = ("q", "k", "l", "_basis", "_present")

    def __init__(self, k: int, l: int, q: int = 256) -> None:
        get_field(q)  # validates the field order
        if k < 1 or l < 1:
            raise ValueError("k and l must be >= 1")
        self.q = q
        self.k = k
        self.l = l
        self._basis = np.zeros((k, k + l), dtype=np.uint8)
        self._present = np.zeros(k, dtype=np.bool_)

    @property
    def rank(self) -> int:
        return int(self._present.sum())

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """Present basis rows' coefficient parts, in pivot order (rank × k)."""
        return self._basis[self._present, : self.k].copy()

    @property
    def symbol_matrix(self) -> np.ndarray:
        """Present basis rows' symbol parts, in pivot order (rank × l)."""
        return self._basis[self._present, self.k :].copy()

    def copy(self) -> "DecoderState":
        dup = DecoderState.__new__(DecoderState)
        dup.q = self.q
        dup.k = self.k
        dup.l = self.l
        dup._basis = self._basis.copy()
        dup._present = self._present.copy()
        return dup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecoderState):
            return NotImplemented
        return (
            self.q == other.q
            and self.k == other.k
            and self.l == other.l
            and np.array_equal(self._present, other._present)
            and np.array_equal(self._basis, other._basis)
        )

    def __repr__(self) -> str:
        return f"DecoderState(k={self.k}, l={self.l}, q={self.q}, rank={self.rank})"


def _nonzero_vector(rng: np.random.Generator, length: int, q: int) -> np.ndarray:
    vec = rng.integers(0, q, size=length, dtype=np.uint8)
    while not vec.any():
        vec = rng.integers(0, q, size=length, dtype=np.uint8)
    return vec


def make_source_shard(payload: Payload, rng: np.random.Generator) -> CodedShard:
    """Fresh rateless shard: uniform nonzero coefficients, symbols = coeffs · data."""
    field = get_field(payload.q)
    coeffs = _nonzero_vector(rng, payload.k, payload.q)
    row = np.empty(payload.k + payload.l, dtype=np.uint8)
    _kernels.encode_row(coeffs, payload.data, row, field.mul_table)
    return CodedShard(row[: payload.k], row[payload.k :], q=payload.q)


def recode(state: DecoderState, rng: np.random.Generator) -> CodedShard:
    """Uniformly random linear combination of the state's basis rows.

    Coefficients are resampled while all-zero, so the emitted shard is never
    the zero vector (the basis rows are independent, hence a combination is
    zero exactly when every coefficient is zero).
    """
    if state.rank == 0:
        raise ValueError("nothing to recode: decoder state has rank 0")
    field = get_field(state.q)
    alphas = _nonzero_vector(rng, state.rank, state.q)
    out = np.empty(state.k + state.l, dtype=np.uint8)
    _kernels.recode_row(state._basis, state._present, alphas, out, field.mul_table)
    return CodedShard(out[: state.k], out[state.k :], q=state.q)


def absorb(state: DecoderState, shard: CodedShard) -> tuple[DecoderState, bool]:
    """Gaussian-eliminate the shard into a copy of the state.

    Returns (new_state, innovative).  Rank grows by exactly one when the
    shard is innovative, otherwise the returned state equals the input.
    """
    if shard.k != state.k:
        raise ValueError(f"coefficient length {shard.k} does not match decoder k = {state.k}")
    if shard.l != state.l:
        raise ValueError(f"symbol length {shard.l} does not match decoder l = {state.l}")
    if shard.q != state.q:
        raise ValueError(f"shard field GF({shard.q}) does not match decoder field GF({state.q})")
    field = get_field(state.q)
    new = state.copy()
    row = np.concatenate([shard.coeffs, shard.symbols])
    pivot = _kernels.absorb_row(new._basis, new._present, row, field.mul_table, field.inv_table)
    return new, pivot >= 0


def decode(state: DecoderState) -> Payload:
    """Recover the payload; requires full rank.

    With all k pivots present the reduced basis' coefficient block is the
    identity, so the symbol block *is* the payload.
    """
    if state.rank < state.k:
        raise InsufficientRankError(state.rank, state.k)
    return Payload(state._basis[:, state.k :], q=state.q)


def innovation_bound(rank_sender: int, rank_receiver: int, q: int) -> float:
    """Upper bound q^-(rank gap) on a recoded shard being non-innovative.

    Defined only when the sender's subspace dimension strictly exceeds the
    receiver's.
    """
    if rank_receiver < 0:
        raise ValueError("rank_receiver must be >= 0")
    if rank_sender <= rank_receiver:
        raise ValueError(
            f"bound requires rank_sender > rank_receiver (got {rank_sender} <= {rank_receiver})"
        )
    if q < 2:
        raise ValueError("q must be at least 2")
    return float(q) ** -(rank_sender - rank_receiver)
