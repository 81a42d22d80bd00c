"""Pure-numpy bulk kernels over arrays of relation bitmasks.

Each function takes the state count ``n`` and an int64 array of relation
masks (pair (i, j) at bit i*n + j) and returns per-frame flag bytes.  The
fallback path when numba is unavailable or disabled; vectorized over the
mask axis, so memory is proportional to the array length times 2^n for
the table-based kernels.
"""

from __future__ import annotations

import numpy as np


def _succ_rows(n: int, masks: np.ndarray) -> list[np.ndarray]:
    rowmask = (1 << n) - 1
    return [(masks >> (s * n)) & rowmask for s in range(n)]


def classify_frames(n: int, masks: np.ndarray) -> np.ndarray:
    """Flags per frame: bit 0 symmetric, bit 1 serial, bit 2 the
    first-order Q condition (each state has a successor seeing only it)."""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    succ = _succ_rows(n, masks)
    sym = np.ones(masks.shape, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            sym &= ((masks >> (i * n + j)) & 1) == ((masks >> (j * n + i)) & 1)
    serial = np.ones(masks.shape, dtype=bool)
    for s in range(n):
        serial &= succ[s] != 0
    qfol = np.ones(masks.shape, dtype=bool)
    for s in range(n):
        has_witness = np.zeros(masks.shape, dtype=bool)
        only_s = ~np.int64(1 << s)
        for t in range(n):
            sees_t = ((succ[s] >> t) & 1) == 1
            t_sees_only_s = (succ[t] & only_s) == 0
            has_witness |= sees_t & t_sees_only_s
        qfol &= has_witness
    return (sym.astype(np.uint8)
            | (serial.astype(np.uint8) << 1)
            | (qfol.astype(np.uint8) << 2))


def semantic_flags(n: int, masks: np.ndarray) -> np.ndarray:
    """Subset-quantified flags per frame: bit 0 pos(nec(S)) subset of S for
    all S; bit 1 S subset of pos(nec(S)) for all S; bit 2 sim(sim(S)) = S
    for all S; bit 3 sim(S & T) = sim(S) | sim(T) for all pairs."""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    m = masks.shape[0]
    rowmask = (1 << n) - 1
    succ = _succ_rows(n, masks)

    def nec_of(subset_vec):
        out = np.zeros(m, dtype=np.int64)
        for s in range(n):
            out |= ((succ[s] & ~subset_vec & rowmask) == 0).astype(np.int64) << s
        return out

    def pos_of(subset_vec):
        out = np.zeros(m, dtype=np.int64)
        for s in range(n):
            out |= ((succ[s] & subset_vec) != 0).astype(np.int64) << s
        return out

    def sim_of(subset_vec):
        return pos_of(~subset_vec & rowmask)

    b_ok = np.ones(m, dtype=bool)
    q_ok = np.ones(m, dtype=bool)
    invol_ok = np.ones(m, dtype=bool)
    sim_table = np.empty((1 << n, m), dtype=np.int64)
    for S in range(1 << n):
        const = np.full(m, S, dtype=np.int64)
        posnec = pos_of(nec_of(const))
        b_ok &= (posnec & ~np.int64(S) & rowmask) == 0
        q_ok &= (np.int64(S) & ~posnec & rowmask) == 0
        sim_S = sim_of(const)
        sim_table[S] = sim_S
        invol_ok &= sim_of(sim_S) == S
    demorgan_ok = np.ones(m, dtype=bool)
    for S in range(1 << n):
        for T in range(1 << n):
            lhs = sim_table[S & T]
            rhs = sim_table[S] | sim_table[T]
            demorgan_ok &= lhs == rhs
    return (b_ok.astype(np.uint8)
            | (q_ok.astype(np.uint8) << 1)
            | (invol_ok.astype(np.uint8) << 2)
            | (demorgan_ok.astype(np.uint8) << 3))


def op_distribution_flags(n: int, masks: np.ndarray) -> np.ndarray:
    """Operator laws per frame, quantified over all subset pairs: bit 0
    pos(S | T) = pos(S) | pos(T); bit 1 nec(S & T) = nec(S) & nec(T);
    bit 2 nec(S) | nec(T) subset of nec(S | T)."""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    m = masks.shape[0]
    rowmask = (1 << n) - 1
    succ = _succ_rows(n, masks)
    pos_table = np.empty((1 << n, m), dtype=np.int64)
    nec_table = np.empty((1 << n, m), dtype=np.int64)
    for S in range(1 << n):
        pos = np.zeros(m, dtype=np.int64)
        nec = np.zeros(m, dtype=np.int64)
        for s in range(n):
            pos |= ((succ[s] & S) != 0).astype(np.int64) << s
            nec |= ((succ[s] & ~np.int64(S) & rowmask) == 0).astype(np.int64) << s
        pos_table[S] = pos
        nec_table[S] = nec
    pos_union = np.ones(m, dtype=bool)
    nec_inter = np.ones(m, dtype=bool)
    one_way = np.ones(m, dtype=bool)
    for S in range(1 << n):
        for T in range(1 << n):
            pos_union &= pos_table[S | T] == (pos_table[S] | pos_table[T])
            nec_inter &= nec_table[S & T] == (nec_table[S] & nec_table[T])
            one_way &= ((nec_table[S] | nec_table[T]) & ~nec_table[S | T]) == 0
    return (pos_union.astype(np.uint8)
            | (nec_inter.astype(np.uint8) << 1)
            | (one_way.astype(np.uint8) << 2))


def fact1_all(n: int, masks: np.ndarray) -> np.ndarray:
    """1 iff the relation equals its reconstruction from nec: s R t holds
    exactly when every subset S with s in nec(S) contains t."""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    m = masks.shape[0]
    rowmask = (1 << n) - 1
    succ = _succ_rows(n, masks)
    ok = np.ones(m, dtype=bool)
    for s in range(n):
        for t in range(n):
            related = ((masks >> (s * n + t)) & 1) == 1
            forced = np.ones(m, dtype=bool)
            for S in range(1 << n):
                if (S >> t) & 1:
                    continue
                # s in nec(S) would force t into S; S omits t, so s must
                # not be in nec(S).
                forced &= (succ[s] & ~np.int64(S) & rowmask) != 0
            ok &= related == forced
    return ok.astype(np.uint8)
