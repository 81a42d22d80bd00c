"""Exhaustive small-frame suites tying the other modules together.

Four suites: frame-class correspondences (axiom validity against the
first-order frame conditions), the box/conjunction versus box/disjunction
distribution asymmetry, a search for a state satisfying ``[]p & [](q|r)``
but not ``[](p&q) | [](p&r)`` over the restricted frame class, and a
non-asserting validity report for the translated axiom schemes.

All-frames suites run exhaustively up to 3 states and switch to seeded
sampling beyond; the filtered frame class is enumerated exhaustively up
to 5 states.  Every suite is deterministic given its config, including
under ``threads`` > 1: the frame stream is chunked in enumeration order
and chunk results are merged in order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .baoframe import (KripkeFrame, KripkeModel, bq_valid_on_frame,
                       check_b_semantic, check_q_fol, check_q_semantic,
                       check_seriality, check_symmetry, eval_bq, extension,
                       frame_to_json)
from .formula import QL_AXIOM_ARITY, Atom, parse_bq, print_bq, ql_axiom, translate
from .guards import require
from .oml import gen_boolean, gen_mo, ql_valid
from .report import CertificateReport, CheckEntry

EXHAUSTIVE_MAX_STATES = 3
SAMPLE_COUNT = 2000
_CHUNK = 1024


@dataclass(frozen=True)
class SuiteConfig:
    max_states: int = 3
    atom_budget: int = 3
    sample_seed: int | None = None
    frame_filter: str = "none"

    def __post_init__(self):
        require("suite-states", self.max_states <= 5,
                f"max_states={self.max_states} exceeds 5")
        if self.frame_filter not in ("none", "b+q", "serial"):
            raise ValueError(f"unknown frame filter {self.frame_filter!r}")


def enumerate_frames(n: int) -> Iterator[KripkeFrame]:
    """All frames on n states, in ascending relation-bitmask order."""
    require("enumerate-frames", n <= 5, f"n={n} means 2^{n * n} relations")
    for mask in range(1 << (n * n)):
        yield KripkeFrame.from_mask(n, mask)


def bq_frame_masks(n: int) -> list[int]:
    """Relation masks (ascending) of the frames where both the symmetry
    and Q subset inclusions hold.

    Up to n=4 this runs the subset-quantified kernel over every relation.
    At n=5 the 2^25 relations are prefiltered by the first-order kernel
    (symmetric and Q-witnessed) and the survivors are rechecked with the
    subset-quantified definitions; the two characterisations are verified
    equivalent exhaustively for n <= 4 by the kernels and for n <= 3 by
    the correspondence suite.
    """
    require("enumerate-frames", n <= 5, f"n={n} means 2^{n * n} relations")
    if n <= 4:
        masks = np.arange(1 << (n * n), dtype=np.int64)
        flags = kernels.semantic_flags(n, masks)
        return [int(m) for m in masks[(flags & 3) == 3]]
    survivors: list[int] = []
    total = 1 << (n * n)
    step = 1 << 22
    for start in range(0, total, step):
        masks = np.arange(start, min(start + step, total), dtype=np.int64)
        flags = kernels.classify_frames(n, masks)
        survivors.extend(int(m) for m in masks[(flags & 5) == 5])
    return [m for m in survivors
            if check_b_semantic(KripkeFrame.from_mask(n, m))
            and check_q_semantic(KripkeFrame.from_mask(n, m))]


def _filtered_masks(n: int, frame_filter: str) -> list[int] | range:
    if frame_filter == "b+q":
        return bq_frame_masks(n)
    masks = range(1 << (n * n))
    if frame_filter == "serial":
        return [m for m in masks
                if check_seriality(KripkeFrame.from_mask(n, m))]
    return masks


def _suite_levels(cfg: SuiteConfig) -> list[tuple[int, np.ndarray, dict]]:
    """Per state count: the masks to visit and how they were chosen."""
    levels = []
    for n in range(1, cfg.max_states + 1):
        if n <= EXHAUSTIVE_MAX_STATES:
            masks = np.arange(1 << (n * n), dtype=np.int64)
            meta = {"n": n, "mode": "exhaustive", "frames": int(masks.size)}
        else:
            if cfg.sample_seed is None:
                raise ValueError(
                    "sample_seed required: max_states > "
                    f"{EXHAUSTIVE_MAX_STATES} samples the frame space")
            rng = np.random.default_rng(cfg.sample_seed + n)
            drawn = rng.integers(0, 1 << (n * n), size=SAMPLE_COUNT,
                                 dtype=np.int64)
            masks = np.unique(drawn)
            meta = {"n": n, "mode": "sampled", "frames": int(masks.size),
                    "seed": cfg.sample_seed}
        levels.append((n, masks, meta))
    return levels


def _chunks(masks: np.ndarray) -> list[np.ndarray]:
    if masks.size == 0:
        return []
    return [masks[i:i + _CHUNK] for i in range(0, masks.size, _CHUNK)]


def _map_ordered(fn, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# Correspondence suite

_B_AXIOM = parse_bq("p -> []<>p")
_Q_AXIOM = parse_bq("[]<>p -> p")
_D_AXIOM = parse_bq("!([]false)")


def correspondence_suite(cfg: SuiteConfig, threads: int = 1) -> CertificateReport:
    """For every visited frame: validity of the B, Q and D axioms against
    the first-order frame conditions (symmetry; the Q condition, checked
    both first-order and by subset inclusion; seriality, implied by Q)."""
    report = CertificateReport("correspondence")

    def scan(chunk: np.ndarray) -> tuple[list[CheckEntry], np.ndarray]:
        entries = []
        counts = np.zeros(4, dtype=np.int64)
        for mask in chunk:
            F = KripkeFrame.from_mask(n, int(mask))
            fjson = frame_to_json(F)
            b_valid = bq_valid_on_frame(F, _B_AXIOM)[0]
            sym = check_symmetry(F)
            entries.append(CheckEntry(
                "b-axiom-iff-symmetric", b_valid == sym,
                {"axiom_valid": b_valid, "symmetric": sym}, fjson))
            q_valid = bq_valid_on_frame(F, _Q_AXIOM)[0]
            q_fol = check_q_fol(F)
            q_sem = check_q_semantic(F)
            entries.append(CheckEntry(
                "q-axiom-iff-q-fol-iff-q-semantic",
                q_valid == q_fol and q_fol == q_sem,
                {"axiom_valid": q_valid, "q_fol": q_fol, "q_semantic": q_sem},
                fjson))
            d_valid = bq_valid_on_frame(F, _D_AXIOM)[0]
            serial = check_seriality(F)
            entries.append(CheckEntry(
                "q-fol-implies-serial-iff-d-axiom",
                (serial or not q_fol) and serial == d_valid,
                {"q_fol": q_fol, "serial": serial, "d_axiom_valid": d_valid},
                fjson))
            counts += np.array([sym, serial, q_fol, sym and q_fol],
                               dtype=np.int64)
        return entries, counts

    for n, masks, meta in _suite_levels(cfg):
        results = _map_ordered(scan, _chunks(masks), threads)
        counts = np.zeros(4, dtype=np.int64)
        for entries, chunk_counts in results:
            report.entries.extend(entries)
            counts += chunk_counts
        report.add("class-counts", None, {
            **meta,
            "symmetric": int(counts[0]),
            "serial": int(counts[1]),
            "q_fol": int(counts[2]),
            "b_and_q": int(counts[3]),
        })
    return report


# --------------------------------------------------------------------------
# Distribution suite

_BOX_MEET = parse_bq("[](p & q) <-> []p & []q")
_ONE_WAY = parse_bq("[]p | []q -> [](p | q)")
_CONVERSE = parse_bq("[](p | q) -> []p | []q")


def distribution_suite(cfg: SuiteConfig, threads: int = 1) -> CertificateReport:
    """Box distributes over conjunction in both directions and over
    disjunction one way only; the first frame, valuation and state
    falsifying the other disjunction direction is exhibited.

    Each frame is checked along two routes: formula validity and the
    subset-level operator laws from the kernels.
    """
    report = CertificateReport("distribution")

    def scan(chunk: np.ndarray) -> tuple[list[CheckEntry], list]:
        flags = kernels.op_distribution_flags(n, chunk)
        entries = []
        converse_hits = []
        for mask, frame_flags in zip(chunk, flags):
            F = KripkeFrame.from_mask(n, int(mask))
            fjson = frame_to_json(F)
            meet_valid = bq_valid_on_frame(F, _BOX_MEET)[0]
            meet_kernel = bool(frame_flags & 2)
            entries.append(CheckEntry(
                "box-meet-two-way", meet_valid and meet_kernel,
                {"formula_route": meet_valid, "subset_route": meet_kernel},
                fjson))
            one_valid = bq_valid_on_frame(F, _ONE_WAY)[0]
            one_kernel = bool(frame_flags & 4)
            entries.append(CheckEntry(
                "box-join-one-way", one_valid and one_kernel,
                {"formula_route": one_valid, "subset_route": one_kernel},
                fjson))
            conv_valid, witness = bq_valid_on_frame(F, _CONVERSE)
            if not conv_valid:
                val, state = witness
                converse_hits.append((int(mask), val, state))
        return entries, converse_hits

    counterexample = None
    for n, masks, meta in _suite_levels(cfg):
        results = _map_ordered(scan, _chunks(masks), threads)
        for entries, hits in results:
            report.entries.extend(entries)
            if counterexample is None and hits:
                mask, val, state = hits[0]
                counterexample = {
                    "frame": frame_to_json(KripkeFrame.from_mask(n, mask)),
                    "valuation": {k: _mask_states(v) for k, v in val.items()},
                    "state": state,
                }
        report.add("level-summary", None, meta)
    report.add("box-join-converse-counterexample", counterexample is not None,
               counterexample)
    return report


def _mask_states(mask: int) -> list[int]:
    return [s for s in range(mask.bit_length()) if (mask >> s) & 1]


# --------------------------------------------------------------------------
# Paradox search

_PREMISE = parse_bq("[]p & [](q | r)")
_CONCLUSION = parse_bq("[](p & q) | [](p & r)")
_CONVERSE_IMPL = parse_bq("[](p & q) | [](p & r) -> []p & [](q | r)")
_PIECES = {name: parse_bq(text) for name, text in [
    ("[]p", "[]p"),
    ("[](q | r)", "[](q | r)"),
    ("[](p & q)", "[](p & q)"),
    ("[](p & r)", "[](p & r)"),
]}


def _paradox_scan_frame(F: KripkeFrame) -> tuple[dict[str, int], int] | None:
    """First (valuation, state) where the premise holds and the conclusion
    fails, scanning valuations of p, q, r in mask-tuple order."""
    n = F.n
    nsub = 1 << n
    full = F.full
    succ = F.succ_masks()
    nec = np.zeros(nsub, dtype=np.int64)
    for S in range(nsub):
        m = 0
        for s in range(n):
            if succ[s] & ~S == 0:
                m |= 1 << s
        nec[S] = m
    idx = np.arange(nsub ** 3, dtype=np.int64)
    p = idx >> (2 * n)
    q = (idx >> n) & full
    r = idx & full
    premise = nec[p] & nec[q | r]
    conclusion = nec[p & q] | nec[p & r]
    bad = premise & ~conclusion & full
    hits = np.nonzero(bad)[0]
    if hits.size == 0:
        return None
    first = int(hits[0])
    state_mask = int(bad[first])
    state = (state_mask & -state_mask).bit_length() - 1
    val = {"p": int(p[first]), "q": int(q[first]), "r": int(r[first])}
    return val, state


def paradox_search(
    cfg: SuiteConfig, threads: int = 1
) -> tuple[tuple[KripkeModel, int] | None, CertificateReport]:
    """Search the configured frame class for a model and state where
    ``[]p & [](q|r)`` holds but ``[](p&q) | [](p&r)`` fails.

    Any witness is re-verified along both evaluation routes (per-state
    recursion and bitmask extensions).  The converse implication is also
    asserted valid over all frames with up to 3 states.
    """
    report = CertificateReport("paradox")
    witness: tuple[KripkeModel, int] | None = None
    examined = 0
    for n in range(1, cfg.max_states + 1):
        mask_list = list(_filtered_masks(n, cfg.frame_filter))
        examined += len(mask_list)

        def scan(chunk: list[int]) -> tuple[int, dict[str, int], int] | None:
            for mask in chunk:
                hit = _paradox_scan_frame(KripkeFrame.from_mask(n, mask))
                if hit is not None:
                    return mask, hit[0], hit[1]
            return None

        chunk_list = [mask_list[i:i + _CHUNK]
                      for i in range(0, len(mask_list), _CHUNK)]
        if witness is None:
            for result in _map_ordered(scan, chunk_list, threads):
                if result is not None:
                    mask, val, state = result
                    model = KripkeModel(KripkeFrame.from_mask(n, mask), val)
                    witness = (model, state)
                    break
        report.add("frames-searched", None,
                   {"n": n, "frames": len(mask_list),
                    "filter": cfg.frame_filter, "mode": "exhaustive"})
        if witness is not None:
            break

    if witness is not None:
        model, state = witness
        recursive_ok = (eval_bq(model, state, _PREMISE)
                        and not eval_bq(model, state, _CONCLUSION))
        ext_premise = extension(model, _PREMISE)
        ext_conclusion = extension(model, _CONCLUSION)
        extension_ok = bool((ext_premise >> state) & 1
                            and not (ext_conclusion >> state) & 1)
        pieces = {name: eval_bq(model, state, f)
                  for name, f in _PIECES.items()}
        report.add("paradox-witness", recursive_ok and extension_ok, {
            "frame": frame_to_json(model.frame),
            "valuation": {k: _mask_states(v)
                          for k, v in model.valuation.items()},
            "state": state,
            "formulas": pieces,
            "reverified": {"recursive": recursive_ok,
                           "extension": extension_ok},
        })
    else:
        report.add("paradox-witness", None,
                   {"found": False, "exhaustive": True,
                    "frames_examined": examined,
                    "filter": cfg.frame_filter})

    bad_frame = None
    for n in range(1, min(cfg.max_states, EXHAUSTIVE_MAX_STATES) + 1):
        for mask in range(1 << (n * n)):
            F = KripkeFrame.from_mask(n, mask)
            if not bq_valid_on_frame(F, _CONVERSE_IMPL)[0]:
                bad_frame = frame_to_json(F)
                break
        if bad_frame:
            break
    report.add("converse-implication-valid-everywhere", bad_frame is None,
               bad_frame)
    return witness, report


# --------------------------------------------------------------------------
# Translation report

_FIXTURES = [
    ("boolean2", gen_boolean, 2),
    ("boolean3", gen_boolean, 3),
    ("mo2", gen_mo, 2),
    ("mo3", gen_mo, 3),
    ("mo4", gen_mo, 4),
]

_DUAL_FORMS = {
    "box-diamond": parse_bq("[]<>p <-> p"),
    "diamond-box": parse_bq("<>[]p <-> p"),
    "modal-K": parse_bq("[](p -> q) -> ([]p -> []q)"),
    "modal-BQ": parse_bq("[]<>p <-> p"),
    "d-axiom": parse_bq("!([]false)"),
}


def translation_report(cfg: SuiteConfig) -> CertificateReport:
    """Data report, asserting nothing: lattice validity of each axiom
    scheme over the fixture set, and frame validity of its translation
    over the restricted frame class up to ``cfg.max_states`` states.
    """
    report = CertificateReport("translation-report")
    lattices = [(name, gen(k)) for name, gen, k in _FIXTURES]
    frames = []
    for n in range(1, cfg.max_states + 1):
        frames.extend(KripkeFrame.from_mask(n, m) for m in bq_frame_masks(n))

    args = [Atom("a"), Atom("b"), Atom("c")]
    for i in range(1, 13):
        scheme = ql_axiom(i, *args[:QL_AXIOM_ARITY[i]])
        translated = translate(scheme)
        ql_results = {name: ql_valid(L, scheme)[0] for name, L in lattices}
        valid_count = 0
        first_invalid = None
        for F in frames:
            ok = bq_valid_on_frame(F, translated)[0]
            valid_count += ok
            if not ok and first_invalid is None:
                first_invalid = frame_to_json(F)
        report.add(f"axiom-{i}", None, {
            "ql_valid": ql_results,
            "translation": print_bq(translated),
            "bq_valid_frames": valid_count,
            "frames": len(frames),
            "first_invalid_frame": first_invalid,
        })
    for name, f in _DUAL_FORMS.items():
        valid_count = sum(bq_valid_on_frame(F, f)[0] for F in frames)
        report.add(name, None,
                   {"bq_valid_frames": valid_count, "frames": len(frames)})
    return report
