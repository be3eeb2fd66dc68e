"""Numba kernels for GF(q) row operations.

A decoder state is stored as a pivot-indexed reduced row-echelon matrix:
``basis`` has shape (k, k + l) — k coefficient columns followed by l symbol
columns — and row j, when ``present[j]`` is true, is the basis row whose
pivot sits in coefficient column j.  Absent rows are all zero.  This makes
the representation canonical: two states with equal spans have bit-identical
arrays.

All kernels take the field's multiplication table ``mul`` (q × q uint8) and
inverse table ``inv`` (length q) as arguments, so the same compiled code
serves GF(2) and GF(256).  Everything here mutates its array arguments in
place; the object layer in :mod:`starcast.rlnc` provides value semantics on
top.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def absorb_row(basis, present, row, mul, inv):
    """Gaussian-eliminate ``row`` against ``basis`` and insert the residual.

    ``row`` has length k + l and is destroyed.  Returns the pivot column of
    the inserted row, or -1 if the row was in the span already (state
    untouched in that case).  Keeps the basis in reduced row-echelon form.
    """
    k = basis.shape[0]
    width = row.shape[0]
    for j in range(k):
        f = row[j]
        if f != 0 and present[j]:
            brow = basis[j]
            for t in range(j, width):
                row[t] ^= mul[f, brow[t]]
    pivot = -1
    for j in range(k):
        if row[j] != 0:
            pivot = j
            break
    if pivot < 0:
        return -1
    f = inv[row[pivot]]
    if f != 1:
        for t in range(pivot, width):
            row[t] = mul[f, row[t]]
    for j in range(k):
        if present[j]:
            g = basis[j, pivot]
            if g != 0:
                brow = basis[j]
                for t in range(pivot, width):
                    brow[t] ^= mul[g, row[t]]
    for t in range(width):
        basis[pivot, t] = row[t]
    present[pivot] = True
    return pivot


@njit(cache=True)
def recode_row(basis, present, alphas, out, mul):
    """Write a random linear combination of the present basis rows to ``out``.

    ``alphas`` supplies one coefficient per present row, consumed in pivot
    order; entries beyond the rank are ignored.  Returns the number of
    coefficients consumed (the rank).
    """
    k = basis.shape[0]
    width = basis.shape[1]
    for t in range(width):
        out[t] = 0
    used = 0
    for j in range(k):
        if present[j]:
            a = alphas[used]
            used += 1
            if a != 0:
                brow = basis[j]
                for t in range(j, width):
                    out[t] ^= mul[a, brow[t]]
    return used


@njit(cache=True)
def encode_row(coeffs, data, out, mul):
    """Build a coded row [coeffs | coeffs · data] from payload ``data`` (k × l)."""
    k = data.shape[0]
    l = data.shape[1]
    for t in range(k):
        out[t] = coeffs[t]
    for t in range(l):
        out[k + t] = 0
    for j in range(k):
        a = coeffs[j]
        if a != 0:
            drow = data[j]
            for t in range(l):
                out[k + t] ^= mul[a, drow[t]]


@njit(cache=True)
def encode_rows(coeff_block, data, out_rows, mul):
    for i in range(coeff_block.shape[0]):
        encode_row(coeff_block[i], data, out_rows[i], mul)


@njit(cache=True)
def recode_rows(basis3, present2, donors, alpha_block, out_rows, mul):
    for i in range(donors.shape[0]):
        d = donors[i]
        recode_row(basis3[d], present2[d], alpha_block[i], out_rows[i], mul)


@njit(cache=True)
def absorb_rows(basis3, present2, rank, rows, receivers, innovative_out, mul, inv):
    """Absorb prebuilt coded rows into per-node decoder arrays.

    Nodes already at full rank skip elimination (a further shard cannot be
    innovative).  ``rows`` is destroyed.  Fills ``innovative_out`` per row.
    """
    k = basis3.shape[1]
    for i in range(receivers.shape[0]):
        n = receivers[i]
        if rank[n] >= k:
            innovative_out[i] = False
        else:
            pivot = absorb_row(basis3[n], present2[n], rows[i], mul, inv)
            if pivot >= 0:
                rank[n] += 1
                innovative_out[i] = True
            else:
                innovative_out[i] = False
