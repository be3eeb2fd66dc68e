"""Codec tests: rank tracking against a brute-force span oracle, round-trips,
recoding algebra, wire layout, and the innovation probability bound."""

import numpy as np
import pytest

from starcast.rlnc import (
    CodedShard,
    DecoderState,
    InsufficientRankError,
    Payload,
    absorb,
    decode,
    innovation_bound,
    make_source_shard,
    recode,
)


def span_size_gf2(vectors):
    """|span| of GF(2) row vectors, by enumerating every subset XOR.

    Exponential in the number of vectors — usable only for tiny cases, which
    is the point: it shares no code with the decoder's elimination.
    """
    masks = [int("".join(str(int(b)) for b in v), 2) if np.any(v) else 0 for v in vectors]
    span = {0}
    for m in masks:
        span |= {x ^ m for x in span}
    return len(span)


def gf2_shard(coeff_bits, payload):
    """Build the GF(2) shard with the given coefficient bits over `payload`."""
    coeffs = np.array(coeff_bits, dtype=np.uint8)
    symbols = np.zeros(payload.l, dtype=np.uint8)
    for j in np.flatnonzero(coeffs):
        symbols ^= payload.data[j]
    return CodedShard(coeffs, symbols, q=2)


def test_rank_matches_brute_force_span_oracle():
    rng = np.random.default_rng(11)
    for k in range(2, 7):
        payload = Payload.random(k, 4, q=2, rng=rng)
        for _ in range(20):
            state = DecoderState(k, 4, q=2)
            received = []
            for _ in range(k + 3):
                bits = rng.integers(0, 2, size=k)
                if not bits.any():
                    bits[rng.integers(k)] = 1
                state, _ = absorb(state, gf2_shard(bits, payload))
                received.append(bits)
                assert 2 ** state.rank == span_size_gf2(received)


@pytest.mark.parametrize("q", [2, 256])
def test_randomized_round_trips(q):
    rng = np.random.default_rng(q)
    for _ in range(30):
        k = int(rng.integers(1, 17))
        l = int(rng.integers(1, 33))
        payload = Payload.random(k, l, q=q, rng=rng)
        state = DecoderState(k, l, q=q)
        sent = 0
        while state.rank < k:
            state, _ = absorb(state, make_source_shard(payload, rng))
            sent += 1
            assert sent < 40 * k, "decoder failed to reach full rank"
        recovered = decode(state)
        assert np.array_equal(recovered.data, payload.data)


def test_unit_vector_shards_decode_in_any_order():
    rng = np.random.default_rng(3)
    payload = Payload.random(5, 7, rng=rng)
    state = DecoderState(5, 7)
    for i in rng.permutation(5):
        coeffs = np.zeros(5, dtype=np.uint8)
        coeffs[i] = 1
        state, innovative = absorb(state, CodedShard(coeffs, payload.data[i]))
        assert innovative
    assert np.array_equal(decode(state).data, payload.data)


def test_state_is_canonical_across_absorb_orders():
    rng = np.random.default_rng(19)
    payload = Payload.random(6, 8, rng=rng)
    shards = [make_source_shard(payload, rng) for _ in range(6)]
    a = DecoderState(6, 8)
    b = DecoderState(6, 8)
    for s in shards:
        a, _ = absorb(a, s)
    for s in reversed(shards):
        b, _ = absorb(b, s)
    assert a == b
    assert a.rank == b.rank


def test_absorb_is_pure_and_duplicates_are_not_innovative():
    rng = np.random.default_rng(5)
    payload = Payload.random(4, 6, rng=rng)
    empty = DecoderState(4, 6)
    shard = make_source_shard(payload, rng)
    state, innovative = absorb(empty, shard)
    assert innovative and state.rank == 1 and empty.rank == 0
    again, innovative = absorb(state, shard)
    assert not innovative
    assert again == state


def test_recode_stays_in_the_senders_span():
    rng = np.random.default_rng(23)
    payload = Payload.random(8, 16, rng=rng)
    state = DecoderState(8, 16)
    for _ in range(5):
        state, _ = absorb(state, make_source_shard(payload, rng))
    for _ in range(50):
        shard = recode(state, rng)
        _, innovative = absorb(state, shard)
        assert not innovative  # recoded shards never leave the span
        assert shard.coeffs.any()


def test_recode_of_rank_one_state_is_a_scalar_multiple():
    rng = np.random.default_rng(29)
    payload = Payload.random(3, 4, rng=rng)
    state, _ = absorb(DecoderState(3, 4), make_source_shard(payload, rng))
    base = np.concatenate([state.coefficient_matrix[0], state.symbol_matrix[0]])
    from starcast.galois import get_field

    mul = get_field(256).mul_table
    for _ in range(20):
        shard = recode(state, rng)
        got = np.concatenate([shard.coeffs, shard.symbols])
        nz = int(np.flatnonzero(base)[0])
        scale = got[nz]  # base[nz] is 1: the basis row is normalized
        assert scale != 0
        assert np.array_equal(got, mul[scale, base])


def test_recoded_symbols_are_consistent_with_coefficients():
    # A recoded shard must satisfy symbols = coeffs · payload even though it
    # was produced from the decoder's reduced rows, not from the payload.
    rng = np.random.default_rng(31)
    payload = Payload.random(6, 9, rng=rng)
    state = DecoderState(6, 9)
    for _ in range(4):
        state, _ = absorb(state, make_source_shard(payload, rng))
    from starcast.galois import get_field

    mul = get_field(256).mul_table
    for _ in range(25):
        shard = recode(state, rng)
        expected = np.zeros(9, dtype=np.uint8)
        for j in range(6):
            expected ^= mul[shard.coeffs[j], payload.data[j]]
        assert np.array_equal(shard.symbols, expected)


def test_source_coefficients_look_uniform():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(37)
    payload = Payload.random(8, 1, rng=rng)
    draws = np.concatenate(
        [make_source_shard(payload, rng).coeffs for _ in range(2500)]
    )
    counts = np.bincount(draws, minlength=256)
    result = scipy_stats.chisquare(counts)
    assert result.pvalue > 0.01


def test_gap_one_miss_rate_near_half_over_gf2():
    # Nested spans, donor one dimension ahead over GF(2): a recode misses
    # (lands inside the receiver's span) with probability
    # (2^(d-1) - 1) / (2^d - 1) -> about one half for d = 8.
    rng = np.random.default_rng(41)
    payload = Payload.random(10, 2, q=2, rng=rng)
    donor = DecoderState(10, 2, q=2)
    while donor.rank < 8:
        donor, _ = absorb(donor, make_source_shard(payload, rng))
    receiver = DecoderState(10, 2, q=2)
    # Rebuild 7 of the donor's 8 basis rows so receiver ⊂ donor strictly.
    coeff = donor.coefficient_matrix
    symb = donor.symbol_matrix
    for i in range(7):
        receiver, _ = absorb(receiver, CodedShard(coeff[i], symb[i], q=2))
    assert receiver.rank == 7
    misses = 0
    n = 4000
    for _ in range(n):
        _, innovative = absorb(receiver, recode(donor, rng))
        misses += not innovative
    assert 0.45 < misses / n < 0.55


def test_gap_one_miss_rate_small_over_gf256():
    # Same construction over GF(256): the miss probability is
    # (q^(d-1) - 1)/(q^d - 1) < 1/q; check the empirical rate against the
    # 1/q bound plus three binomial sigmas.
    rng = np.random.default_rng(43)
    payload = Payload.random(4, 2, rng=rng)
    donor = DecoderState(4, 2)
    while donor.rank < 2:
        donor, _ = absorb(donor, make_source_shard(payload, rng))
    receiver, _ = absorb(
        DecoderState(4, 2),
        CodedShard(donor.coefficient_matrix[0], donor.symbol_matrix[0]),
    )
    n = 10_000
    misses = 0
    for _ in range(n):
        _, innovative = absorb(receiver, recode(donor, rng))
        misses += not innovative
    bound = innovation_bound(donor.rank, receiver.rank, 256)
    assert misses / n <= bound + 3 * np.sqrt(bound * (1 - bound) / n)


def test_wire_layout_round_trip():
    rng = np.random.default_rng(47)
    payload = Payload.random(3, 5, rng=rng)
    shard = make_source_shard(payload, rng)
    raw = shard.to_bytes()
    assert len(raw) == 3 + 5
    assert raw[:3] == shard.coeffs.tobytes()
    assert raw[3:] == shard.symbols.tobytes()
    back = CodedShard.from_bytes(raw, 3, 5)
    assert np.array_equal(back.coeffs, shard.coeffs)
    assert np.array_equal(back.symbols, shard.symbols)
    with pytest.raises(ValueError, match="expected 8 bytes"):
        CodedShard.from_bytes(raw[:-1], 3, 5)


def test_innovation_bound_values_and_domain():
    assert innovation_bound(3, 2, 256) == pytest.approx(1 / 256)
    assert innovation_bound(5, 1, 2) == pytest.approx(1 / 16)
    assert innovation_bound(4, 0, 2) == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        innovation_bound(2, 2, 256)
    with pytest.raises(ValueError):
        innovation_bound(1, 3, 256)
    with pytest.raises(ValueError):
        innovation_bound(3, -1, 256)
    with pytest.raises(ValueError):
        innovation_bound(3, 1, 1)


def test_decode_requires_full_rank():
    rng = np.random.default_rng(53)
    payload = Payload.random(4, 4, rng=rng)
    state, _ = absorb(DecoderState(4, 4), make_source_shard(payload, rng))
    with pytest.raises(InsufficientRankError) as exc_info:
        decode(state)
    assert exc_info.value.rank == 1
    assert exc_info.value.k == 4


def test_recode_requires_positive_rank():
    with pytest.raises(ValueError, match="rank 0"):
        recode(DecoderState(2, 2), np.random.default_rng(0))


def test_absorb_shape_and_field_mismatches():
    rng = np.random.default_rng(59)
    p34 = Payload.random(3, 4, rng=rng)
    state = DecoderState(3, 4)
    with pytest.raises(ValueError, match="coefficient length"):
        absorb(state, make_source_shard(Payload.random(4, 4, rng=rng), rng))
    with pytest.raises(ValueError, match="symbol length"):
        absorb(state, make_source_shard(Payload.random(3, 5, rng=rng), rng))
    with pytest.raises(ValueError, match="field"):
        absorb(state, make_source_shard(Payload.random(3, 4, q=2, rng=rng), rng))
    state, _ = absorb(state, make_source_shard(p34, rng))
    assert state.rank == 1


def test_payload_and_shard_validation():
    with pytest.raises(ValueError):
        Payload(np.zeros((0, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        Payload(np.zeros(4, dtype=np.uint8))
    with pytest.raises(ValueError, match="outside GF\\(2\\)"):
        Payload(np.full((2, 2), 9, dtype=np.uint8), q=2)
    with pytest.raises(ValueError):
        CodedShard(np.zeros((2, 2), dtype=np.uint8), np.zeros(2, dtype=np.uint8))
    with pytest.raises(ValueError):
        DecoderState(0, 4)
    with pytest.raises(ValueError):
        DecoderState(4, 4, q=7)
