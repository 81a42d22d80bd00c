"""Finite Kripke frames and the powerset algebra with operators.

States are the integers ``0..n-1`` and state sets are int bitmasks, so the
algebra operations are single machine-word bitwise operations (frames are
capped at 64 states).  ``pos_op`` is "some successor lies in S", ``nec_op``
is "all successors lie in S", and ``sim_op`` is ``pos_op`` after
complement; the latter interprets the non-classical negation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import formula as fm
from .guards import require
from .report import CertificateReport

StateSet = int

FACT2_SAMPLE = 100_000


@dataclass(frozen=True)
class KripkeFrame:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if not 0 <= self.n <= 64:
            raise ValueError(f"state count must be within 0..64, got {self.n}")
        for (a, b) in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={self.n}")

    @property
    def full(self) -> StateSet:
        return (1 << self.n) - 1

    def succ(self, s: int) -> StateSet:
        mask = 0
        for (a, b) in self.edges:
            if a == s:
                mask |= 1 << b
        return mask

    def succ_masks(self) -> tuple[StateSet, ...]:
        masks = [0] * self.n
        for (a, b) in self.edges:
            masks[a] |= 1 << b
        return tuple(masks)

    def mask(self) -> int:
        """Relation as a single bitmask: pair (i, j) sits at bit i*n + j."""
        m = 0
        for (a, b) in self.edges:
            m |= 1 << (a * self.n + b)
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "KripkeFrame":
        edges = frozenset(
            (i, j) for i in range(n) for j in range(n)
            if (mask >> (i * n + j)) & 1
        )
        return cls(n, edges)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "KripkeFrame":
        return cls(n, frozenset((int(a), int(b)) for a, b in pairs))


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    valuation: dict[str, StateSet]

    def __post_init__(self):
        for name, mask in self.valuation.items():
            if not fm._IDENT.fullmatch(name):
                raise ValueError(f"bad atom name {name!r}")
            if mask & ~self.frame.full:
                raise ValueError(f"valuation of {name!r} exceeds the frame")


# --------------------------------------------------------------------------
# Algebra operations


def complement(F: KripkeFrame, S: StateSet) -> StateSet:
    return F.full & ~S


def pos_op(F: KripkeFrame, S: StateSet) -> StateSet:
    """States with at least one successor in S."""
    out = 0
    for s, succ in enumerate(F.succ_masks()):
        if succ & S:
            out |= 1 << s
    return out


def nec_op(F: KripkeFrame, S: StateSet) -> StateSet:
    """States all of whose successors lie in S."""
    out = 0
    for s, succ in enumerate(F.succ_masks()):
        if succ & ~S == 0:
            out |= 1 << s
    return out


def sim_op(F: KripkeFrame, S: StateSet) -> StateSet:
    """pos_op after complement; the algebraic reading of ``~``."""
    return pos_op(F, complement(F, S))


# --------------------------------------------------------------------------
# Frame-property checkers


def check_symmetry(F: KripkeFrame) -> bool:
    return all((b, a) in F.edges for (a, b) in F.edges)


def check_seriality(F: KripkeFrame) -> bool:
    return all(succ != 0 for succ in F.succ_masks())


def check_q_fol(F: KripkeFrame) -> bool:
    """Every state has a successor whose only successor is that state."""
    succ = F.succ_masks()
    for s in range(F.n):
        found = False
        for t in range(F.n):
            if (succ[s] >> t) & 1 and succ[t] & ~(1 << s) == 0:
                found = True
                break
        if not found:
            return False
    return True


def check_b_semantic(F: KripkeFrame) -> bool:
    """pos_op(nec_op(S)) is contained in S for every subset S."""
    require("b-semantic-states", F.n <= 10, f"n={F.n} exceeds 10")
    for S in range(1 << F.n):
        if pos_op(F, nec_op(F, S)) & ~S:
            return False
    return True


def check_q_semantic(F: KripkeFrame) -> bool:
    """Every subset S is contained in pos_op(nec_op(S))."""
    require("q-semantic-states", F.n <= 10, f"n={F.n} exceeds 10")
    for S in range(1 << F.n):
        if S & ~pos_op(F, nec_op(F, S)):
            return False
    return True


def check_fact1(F: KripkeFrame) -> CertificateReport:
    """The relation is recoverable from nec_op: s R s' holds iff membership
    of s in nec_op(S) forces membership of s' in S, for every subset S."""
    require("fact1-states", F.n <= 12, f"n={F.n} exceeds 12 (2^n subsets)")
    report = CertificateReport("fact1")
    succ = F.succ_masks()
    nec = [0] * (1 << F.n)
    for S in range(1 << F.n):
        m = 0
        for s in range(F.n):
            if succ[s] & ~S == 0:
                m |= 1 << s
        nec[S] = m
    witness = None
    for s in range(F.n):
        for t in range(F.n):
            related = bool((succ[s] >> t) & 1)
            forced = all(
                not ((nec[S] >> s) & 1) or ((S >> t) & 1)
                for S in range(1 << F.n)
            )
            if related != forced:
                witness = {"s": s, "s_prime": t, "related": related,
                           "forced": forced}
                break
        if witness:
            break
    report.add("relation-recoverable-from-nec", witness is None, witness)
    return report


def check_fact2(F: KripkeFrame, sample_seed: int = 0) -> CertificateReport:
    """pos_op distributes over union: pos(S | S') = pos(S) | pos(S').

    Exhaustive over all subset pairs up to a million; beyond that a seeded
    random sample of pairs, with the sample size recorded.
    """
    require("fact2-states", F.n <= 10, f"n={F.n} exceeds 10")
    report = CertificateReport("fact2")
    total_pairs = 1 << (2 * F.n)
    witness = None
    if total_pairs <= 1_000_000:
        mode = {"mode": "exhaustive", "pairs": total_pairs}
        pairs = ((S, T) for S in range(1 << F.n) for T in range(1 << F.n))
    else:
        rng = np.random.default_rng(sample_seed)
        drawn = rng.integers(0, 1 << F.n, size=(FACT2_SAMPLE, 2))
        mode = {"mode": "sampled", "pairs": FACT2_SAMPLE, "seed": sample_seed}
        pairs = ((int(a), int(b)) for a, b in drawn)
    for S, T in pairs:
        if pos_op(F, S | T) != pos_op(F, S) | pos_op(F, T):
            witness = {"S": S, "S_prime": T}
            break
    payload = mode if witness is None else {**mode, "counterexample": witness}
    report.add("pos-additive-over-union", witness is None, payload)
    return report


# --------------------------------------------------------------------------
# Evaluation


def eval_bq(M: KripkeModel, s: int, f: fm.BQFormula) -> bool:
    """Truth at one state, by direct recursion over successors."""
    if not 0 <= s < M.frame.n:
        raise ValueError(f"state {s} out of range")
    g = fm.normalize_bq(f)
    succ = M.frame.succ_masks()

    def ev(state: int, node) -> bool:
        if isinstance(node, fm.Atom):
            try:
                mask = M.valuation[node.name]
            except KeyError:
                raise ValueError(f"unbound atom {node.name!r}") from None
            return bool((mask >> state) & 1)
        if isinstance(node, fm.Top):
            return True
        if isinstance(node, fm.Bot):
            return False
        if isinstance(node, fm.Neg):
            return not ev(state, node.child)
        if isinstance(node, fm.Box):
            return all(
                ev(t, node.child)
                for t in range(M.frame.n)
                if (succ[state] >> t) & 1
            )
        if isinstance(node, fm.And):
            return ev(state, node.left) and ev(state, node.right)
        if isinstance(node, fm.Or):
            return ev(state, node.left) or ev(state, node.right)
        if isinstance(node, fm.Imp):
            return (not ev(state, node.left)) or ev(state, node.right)
        raise TypeError(f"unexpected node after normalization: {node!r}")

    return ev(s, g)


def extension(M: KripkeModel, f: fm.BQFormula) -> StateSet:
    """The set of states where f holds, computed by bitmask algebra."""
    g = fm.normalize_bq(f)
    F = M.frame

    def ext(node) -> StateSet:
        if isinstance(node, fm.Atom):
            try:
                return M.valuation[node.name]
            except KeyError:
                raise ValueError(f"unbound atom {node.name!r}") from None
        if isinstance(node, fm.Top):
            return F.full
        if isinstance(node, fm.Bot):
            return 0
        if isinstance(node, fm.Neg):
            return complement(F, ext(node.child))
        if isinstance(node, fm.Box):
            return nec_op(F, ext(node.child))
        if isinstance(node, fm.And):
            return ext(node.left) & ext(node.right)
        if isinstance(node, fm.Or):
            return ext(node.left) | ext(node.right)
        if isinstance(node, fm.Imp):
            return complement(F, ext(node.left)) | ext(node.right)
        raise TypeError(f"unexpected node after normalization: {node!r}")

    return ext(g)


def _nec_table(F: KripkeFrame) -> list[StateSet]:
    succ = F.succ_masks()
    table = [0] * (1 << F.n)
    for S in range(1 << F.n):
        m = 0
        for s in range(F.n):
            if succ[s] & ~S == 0:
                m |= 1 << s
        table[S] = m
    return table


def bq_valid_on_frame(
    F: KripkeFrame, f: fm.BQFormula
) -> tuple[bool, tuple[dict[str, StateSet], int] | None]:
    """Frame validity: true at every state under every valuation.

    Returns the lexicographically first falsifying (valuation, state) if
    any, ordering valuations by their tuple of masks for the sorted atom
    names and then states numerically.
    """
    atoms = fm.atom_names(f)
    k = len(atoms)
    cost = (1 << F.n) ** k * max(F.n, 1)
    require("bq-valid-valuations", cost <= 10_000_000,
            f"(2^{F.n})^{k} * {F.n} = {cost} valuations*states exceeds 10^7")
    g = fm.normalize_bq(f)
    full = F.full
    nec = _nec_table(F)

    def ext(node, val) -> StateSet:
        if isinstance(node, fm.Atom):
            return val[node.name]
        if isinstance(node, fm.Top):
            return full
        if isinstance(node, fm.Bot):
            return 0
        if isinstance(node, fm.Neg):
            return full & ~ext(node.child, val)
        if isinstance(node, fm.Box):
            return nec[ext(node.child, val)]
        if isinstance(node, fm.And):
            return ext(node.left, val) & ext(node.right, val)
        if isinstance(node, fm.Or):
            return ext(node.left, val) | ext(node.right, val)
        if isinstance(node, fm.Imp):
            return (full & ~ext(node.left, val)) | ext(node.right, val)
        raise TypeError(f"unexpected node after normalization: {node!r}")

    for masks in itertools.product(range(1 << F.n), repeat=k):
        val = dict(zip(atoms, masks))
        satisfied = ext(g, val)
        if satisfied != full:
            missing = full & ~satisfied
            state = (missing & -missing).bit_length() - 1
            return False, (val, state)
    return True, None


# --------------------------------------------------------------------------
# JSON formats


def frame_to_json(F: KripkeFrame) -> dict:
    return {"states": F.n, "edges": sorted([a, b] for (a, b) in F.edges)}


def frame_from_json(data: dict) -> KripkeFrame:
    if not isinstance(data, dict):
        raise ValueError("frame file must be a JSON object")
    unknown = set(data) - {"states", "edges"}
    if unknown:
        raise ValueError(f"unknown keys in frame file: {sorted(unknown)}")
    try:
        n = int(data["states"])
        edges = [(int(a), int(b)) for a, b in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed frame file: {exc}") from None
    return KripkeFrame.from_pairs(n, edges)


def valuation_to_json(val: dict[str, StateSet]) -> dict:
    return {
        name: [s for s in range(mask.bit_length()) if (mask >> s) & 1]
        for name, mask in sorted(val.items())
    }


def valuation_from_json(data: dict, F: KripkeFrame) -> dict[str, StateSet]:
    if not isinstance(data, dict):
        raise ValueError("valuation file must be a JSON object")
    val: dict[str, StateSet] = {}
    for name, states in data.items():
        if not fm._IDENT.fullmatch(name):
            raise ValueError(f"bad atom name {name!r}")
        mask = 0
        for s in states:
            s = int(s)
            if not 0 <= s < F.n:
                raise ValueError(f"state {s} out of range for atom {name!r}")
            mask |= 1 << s
        val[name] = mask
    return val


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
