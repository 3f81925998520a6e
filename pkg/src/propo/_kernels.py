"""Compiled inner loops for bulk Property O decisions.

Every kernel works on a *consistency table* ``cons`` of shape
``(n_orders, m)``: ``cons[o, j]`` is the orientation index that slot ``j``
must carry to be consistent with order ``o``.  An orientation vector
``digits`` is a witness-free (Property O) assignment iff every row of
``cons`` agrees with ``digits`` in at least one slot.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from numba import njit

from .core import lex_permutations, orientation_rank


@lru_cache(maxsize=32)
def consistency_table(n: int, slots: tuple[tuple[int, ...], ...]) -> np.ndarray:
    """Table over all n! orders for the given sorted k-sets (one per slot)."""
    k = len(slots[0]) if slots else 2
    dtype = np.int16 if math.factorial(k) < 2**15 else np.int32
    orders = list(itertools.permutations(range(n)))
    table = np.empty((len(orders), len(slots)), dtype=dtype)
    for o, perm in enumerate(orders):
        rank = [0] * n
        for i, v in enumerate(perm):
            rank[v] = i
        for j, s in enumerate(slots):
            table[o, j] = orientation_rank(sorted(s, key=rank.__getitem__))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=16)
def relabel_tables(n: int, slots: tuple[tuple[int, ...], ...]) -> tuple[np.ndarray, np.ndarray]:
    """For every vertex permutation sigma, where slot j and orientation p go.

    Returns ``(slot_src, orient_map)`` with shapes ``(n!, m)`` and
    ``(n!, m, k!)``: the relabeled vector has ``out[t] =
    orient_map[s, slot_src[s, t], digits[slot_src[s, t]]]``.  Only valid when
    ``slots`` is closed under relabeling (a full tournament).
    """
    k = len(slots[0])
    perms = lex_permutations(k)
    index = {s: j for j, s in enumerate(slots)}
    sigmas = list(itertools.permutations(range(n)))
    m = len(slots)
    slot_src = np.empty((len(sigmas), m), dtype=np.int32)
    orient_map = np.empty((len(sigmas), m, len(perms)), dtype=np.int32)
    for si, sigma in enumerate(sigmas):
        for j, s in enumerate(slots):
            target = index[tuple(sorted(sigma[v] for v in s))]
            slot_src[si, target] = j
            for p, pi in enumerate(perms):
                edge = tuple(sigma[s[i]] for i in pi)
                orient_map[si, j, p] = orientation_rank(edge)
    return slot_src, orient_map


@njit(cache=True)
def _covered(row, digits, m):
    for j in range(m):
        if digits[j] == row[j]:
            return True
    return False


@njit(cache=True)
def _find_witness_row(cons, digits, hint):
    n_orders, m = cons.shape
    if not _covered(cons[hint], digits, m):
        return hint, 1
    for o in range(n_orders):
        if o != hint and not _covered(cons[o], digits, m):
            return o, o + 2
    return -1, n_orders


@njit(cache=True)
def _is_canonical(digits, slot_src, orient_map):
    n_sigma, m = slot_src.shape
    for s in range(n_sigma):
        for t in range(m - 1, -1, -1):
            j = slot_src[s, t]
            d = orient_map[s, j, digits[j]]
            if d < digits[t]:
                return False
            if d > digits[t]:
                break
    return True


@njit(cache=True)
def census_range(cons, radix, start, stop, hits, slot_src, orient_map, canonical):
    """Decide every orientation vector with mixed-radix index in [start, stop).

    Returns ``(n_decided, n_property_o, n_hits_stored, orders_examined)``;
    indices of Property O vectors are written into ``hits`` while room lasts.
    """
    n_orders, m = cons.shape
    digits = np.zeros(m, dtype=np.int64)
    rem = start
    for j in range(m):
        digits[j] = rem % radix
        rem //= radix
    hint = 0
    decided = 0
    found = 0
    stored = 0
    examined = 0
    for idx in range(start, stop):
        if not canonical or _is_canonical(digits, slot_src, orient_map):
            decided += 1
            w, cost = _find_witness_row(cons, digits, hint)
            examined += cost
            if w < 0:
                if stored < hits.shape[0]:
                    hits[stored] = idx
                    stored += 1
                found += 1
            else:
                hint = w
        j = 0
        while j < m:
            digits[j] += 1
            if digits[j] < radix:
                break
            digits[j] = 0
            j += 1
    return decided, found, stored, examined


@njit(cache=True)
def decide_rows(cons, rows):
    """Property O flag for each orientation vector in ``rows``."""
    out = np.zeros(rows.shape[0], dtype=np.bool_)
    hint = 0
    for i in range(rows.shape[0]):
        w, _ = _find_witness_row(cons, rows[i], hint)
        if w < 0:
            out[i] = True
        else:
            hint = w
    return out


def empty_relabel_tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    return np.zeros((0, m), dtype=np.int32), np.zeros((0, m, 1), dtype=np.int32)
