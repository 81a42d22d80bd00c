"""Numba-jitted bulk kernels, mirroring numpy_impl function for function.

Same signatures and flag layouts as numpy_impl; per-frame loops instead of
vectorized passes, so memory stays flat regardless of array length.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _classify(n, masks, out):
    rowmask = (1 << n) - 1
    for idx in range(masks.shape[0]):
        m = masks[idx]
        sym = True
        for i in range(n):
            for j in range(i + 1, n):
                if ((m >> (i * n + j)) & 1) != ((m >> (j * n + i)) & 1):
                    sym = False
                    break
            if not sym:
                break
        serial = True
        qfol = True
        for s in range(n):
            row = (m >> (s * n)) & rowmask
            if row == 0:
                serial = False
                qfol = False
                continue
            found = False
            for t in range(n):
                if (row >> t) & 1:
                    if ((m >> (t * n)) & rowmask) & ~(1 << s) & rowmask == 0:
                        found = True
                        break
            if not found:
                qfol = False
        flags = 0
        if sym:
            flags |= 1
        if serial:
            flags |= 2
        if qfol:
            flags |= 4
        out[idx] = flags


def classify_frames(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape[0], dtype=np.uint8)
    _classify(n, masks, out)
    return out


@njit(cache=True, nogil=True)
def _semantic(n, masks, out):
    rowmask = (1 << n) - 1
    nsub = 1 << n
    succ = np.zeros(n, dtype=np.int64)
    sim_table = np.zeros(nsub, dtype=np.int64)
    for idx in range(masks.shape[0]):
        m = masks[idx]
        for s in range(n):
            succ[s] = (m >> (s * n)) & rowmask
        b_ok = True
        q_ok = True
        invol_ok = True
        for S in range(nsub):
            nec = 0
            for s in range(n):
                if succ[s] & ~S & rowmask == 0:
                    nec |= 1 << s
            posnec = 0
            for s in range(n):
                if succ[s] & nec != 0:
                    posnec |= 1 << s
            if posnec & ~S & rowmask != 0:
                b_ok = False
            if S & ~posnec & rowmask != 0:
                q_ok = False
            sim_S = 0
            comp = ~S & rowmask
            for s in range(n):
                if succ[s] & comp != 0:
                    sim_S |= 1 << s
            sim_table[S] = sim_S
        for S in range(nsub):
            sim_S = sim_table[S]
            simsim = 0
            comp = ~sim_S & rowmask
            for s in range(n):
                if succ[s] & comp != 0:
                    simsim |= 1 << s
            if simsim != S:
                invol_ok = False
                break
        demorgan_ok = True
        for S in range(nsub):
            for T in range(nsub):
                if sim_table[S & T] != sim_table[S] | sim_table[T]:
                    demorgan_ok = False
                    break
            if not demorgan_ok:
                break
        flags = 0
        if b_ok:
            flags |= 1
        if q_ok:
            flags |= 2
        if invol_ok:
            flags |= 4
        if demorgan_ok:
            flags |= 8
        out[idx] = flags


def semantic_flags(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape[0], dtype=np.uint8)
    _semantic(n, masks, out)
    return out


@njit(cache=True, nogil=True)
def _op_distribution(n, masks, out):
    rowmask = (1 << n) - 1
    nsub = 1 << n
    succ = np.zeros(n, dtype=np.int64)
    pos_table = np.zeros(nsub, dtype=np.int64)
    nec_table = np.zeros(nsub, dtype=np.int64)
    for idx in range(masks.shape[0]):
        m = masks[idx]
        for s in range(n):
            succ[s] = (m >> (s * n)) & rowmask
        for S in range(nsub):
            pos = 0
            nec = 0
            for s in range(n):
                if succ[s] & S != 0:
                    pos |= 1 << s
                if succ[s] & ~S & rowmask == 0:
                    nec |= 1 << s
            pos_table[S] = pos
            nec_table[S] = nec
        pos_union = True
        nec_inter = True
        one_way = True
        for S in range(nsub):
            for T in range(nsub):
                if pos_table[S | T] != pos_table[S] | pos_table[T]:
                    pos_union = False
                if nec_table[S & T] != nec_table[S] & nec_table[T]:
                    nec_inter = False
                if (nec_table[S] | nec_table[T]) & ~nec_table[S | T] != 0:
                    one_way = False
        flags = 0
        if pos_union:
            flags |= 1
        if nec_inter:
            flags |= 2
        if one_way:
            flags |= 4
        out[idx] = flags


def op_distribution_flags(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape[0], dtype=np.uint8)
    _op_distribution(n, masks, out)
    return out


@njit(cache=True, nogil=True)
def _fact1(n, masks, out):
    rowmask = (1 << n) - 1
    nsub = 1 << n
    for idx in range(masks.shape[0]):
        m = masks[idx]
        ok = True
        for s in range(n):
            row = (m >> (s * n)) & rowmask
            for t in range(n):
                related = (row >> t) & 1 == 1
                forced = True
                for S in range(nsub):
                    if (S >> t) & 1:
                        continue
                    if row & ~S & rowmask == 0:
                        forced = False
                        break
                if related != forced:
                    ok = False
                    break
            if not ok:
                break
        out[idx] = 1 if ok else 0


def fact1_all(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape[0], dtype=np.uint8)
    _fact1(n, masks, out)
    return out
