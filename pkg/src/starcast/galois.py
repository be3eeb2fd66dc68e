"""Finite-field arithmetic for GF(2) and GF(256).

GF(256) is the byte field F_2[x] / (x^8 + x^4 + x^3 + x + 1), i.e. reduction
polynomial 0x11B.  Multiplication and inversion go through log/antilog tables
built from the generator element 3 (= x + 1), which is primitive for this
polynomial.  Addition in any characteristic-2 field is bitwise XOR.

The module exposes two layers:

* :class:`GaloisField` — holds the full multiplication/inverse tables as numpy
  arrays so bulk code (row reduction, recoding) can do table lookups without
  per-element Python calls.
* ``gf_add`` / ``gf_mul`` / ``gf_inv`` — scalar convenience functions.

All operations are pure; tables are immutable after construction.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

REDUCTION_POLY = 0x11B
SUPPORTED_ORDERS = (2, 256)


def _build_gf256_tables() -> tuple[np.ndarray, np.ndarray]:
    """Return (exp, log) tables for GF(256) under generator 3.

    ``exp`` has length 510 (doubled period) so that products of two logs can
    be looked up without a modular reduction; ``log[0]`` is unused.
    """
    exp = np.zeros(510, dtype=np.uint8)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        # multiply by the generator 3 = x + 1: shift (times x), reduce, add x
        doubled = x << 1
        if doubled & 0x100:
            doubled ^= REDUCTION_POLY
        x ^= doubled
    exp[255:] = exp[:255]
    return exp, log


class GaloisField:
    """Arithmetic tables for GF(q), q in {2, 256}.

    Attributes
    ----------
    q : int
        Field order.
    mul_table : numpy.ndarray, shape (q, q), uint8
        ``mul_table[a, b]`` is the product a*b.
    inv_table : numpy.ndarray, shape (q,), uint8
        ``inv_table[a]`` is the multiplicative inverse of a; entry 0 is a
        placeholder and must never be consulted.
    """

    __slots__ = ("q", "mul_table", "inv_table", "_exp", "_log")

    def __init__(self, q: int) -> None:
        if q not in SUPPORTED_ORDERS:
            raise ValueError(f"unsupported field order {q}; expected one of {SUPPORTED_ORDERS}")
        self.q = q
        if q == 2:
            self.mul_table = np.array([[0, 0], [0, 1]], dtype=np.uint8)
            self.inv_table = np.array([0, 1], dtype=np.uint8)
            self._exp = None
            self._log = None
        else:
            exp, log = _build_gf256_tables()
            nz = np.arange(1, 256)
            mul = np.zeros((256, 256), dtype=np.uint8)
            mul[1:, 1:] = exp[log[nz][:, None] + log[nz][None, :]]
            inv = np.zeros(256, dtype=np.uint8)
            inv[1:] = exp[255 - log[nz]]
            self.mul_table = mul
            self.inv_table = inv
            self._exp = exp
            self._log = log
        self.mul_table.setflags(write=False)
        self.inv_table.setflags(write=False)

    def _check(self, *values: int) -> None:
        for v in values:
            if not 0 <= v < self.q:
                raise ValueError(f"element {v} out of range for GF({self.q})")

    def add(self, a: int, b: int) -> int:
        """a + b (== a - b in characteristic 2)."""
        self._check(a, b)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """a * b under the field's reduction polynomial."""
        self._check(a, b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a; raises on a = 0."""
        self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.q})")
        return int(self.inv_table[a])

    def __repr__(self) -> str:
        return f"GaloisField(q={self.q})"


@lru_cache(maxsize=None)
def get_field(q: int) -> GaloisField:
    """Shared immutable GaloisField instance for the given order."""
    return GaloisField(q)


def gf_add(a: int, b: int, q: int = 256) -> int:
    return get_field(q).add(a, b)


def gf_mul(a: int, b: int, q: int = 256) -> int:
    return get_field(q).mul(a, b)


def gf_inv(a: int, q: int = 256) -> int:
    return get_field(q).inv(a)
