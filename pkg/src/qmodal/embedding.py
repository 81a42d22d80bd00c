"""Embeddings of a finite lattice into the powerset algebra of a frame.

An embedding sends lattice elements to state sets so that distinct
elements get distinct sets, the orthocomplement becomes ``sim_op`` and
meet becomes intersection.  The certifier checks those defining
constraints plus everything derivable from them: order embedding, the
interaction laws of ``sim_op`` with union and intersection, complement
behaviour at the bounds, the orthomodular identity on images, and
preservation of join and bounds.  The searcher finds the
lexicographically first such map by backtracking with constraint
propagation, and the closure operator builds candidate set families
closed under intersection and ``sim_op``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .baoframe import (KripkeFrame, check_b_semantic, check_q_semantic,
                       frame_from_json, frame_to_json, sim_op)
from .guards import require
from .oml import (FiniteOML, LatticeData, build_lattice, check_oml,
                  lattice_from_json, lattice_to_json)
from .report import CertificateReport, CheckEntry


class MalformedEmbedding(ValueError):
    """Shape problems (missing elements, sets out of range), as opposed to
    a well-formed map that violates an embedding law."""


@dataclass(frozen=True)
class Embedding:
    lattice: FiniteOML
    frame: KripkeFrame
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.lattice.size:
            raise MalformedEmbedding(
                f"map covers {len(self.mapping)} of {self.lattice.size} elements")
        for x, mask in enumerate(self.mapping):
            if mask & ~self.frame.full:
                raise MalformedEmbedding(
                    f"image of {self.lattice.elements[x]!r} exceeds the frame")


def _states(mask: int) -> list[int]:
    return [s for s in range(mask.bit_length()) if (mask >> s) & 1]


def certify_embedding(E: Embedding) -> CertificateReport:
    """Check every embedding law over all elements and pairs."""
    L, F, rho = E.lattice, E.frame, E.mapping
    size = L.size
    names = L.elements
    report = CertificateReport("embedding-laws")
    sim_cache: dict[int, int] = {}

    def sim(S: int) -> int:
        if S not in sim_cache:
            sim_cache[S] = sim_op(F, S)
        return sim_cache[S]

    def pair_witness(x, y, **extra):
        return {"pair": [names[x], names[y]],
                **{k: _states(v) for k, v in extra.items()}}

    dup = None
    seen: dict[int, int] = {}
    for x in range(size):
        if rho[x] in seen:
            dup = {"pair": [names[seen[rho[x]]], names[x]],
                   "image": _states(rho[x])}
            break
        seen[rho[x]] = x
    report.add("injective", dup is None, dup)

    bad = next((x for x in range(size) if rho[L.ocompl[x]] != sim(rho[x])),
               None)
    report.add("sim-hom", bad is None,
               None if bad is None else
               {"element": names[bad], "expected": _states(sim(rho[bad])),
                "got": _states(rho[L.ocompl[bad]])})

    bad = next(((x, y) for x in range(size) for y in range(size)
                if rho[L.meet[x][y]] != rho[x] & rho[y]), None)
    report.add("meet-hom", bad is None,
               None if bad is None else pair_witness(*bad))

    bad = next(((x, y) for x in range(size) for y in range(size)
                if L.le(x, y) != (rho[x] & ~rho[y] == 0)), None)
    report.add("order-embedding", bad is None,
               None if bad is None else pair_witness(*bad))

    bad = next((x for x in range(size) if sim(sim(rho[x])) != rho[x]), None)
    report.add("sim-involution", bad is None,
               None if bad is None else {"element": names[bad]})

    # sim over intersections: all subset pairs when the frame is small,
    # otherwise just the image pairs.
    if F.n <= 8:
        bad = next(((S, T) for S in range(1 << F.n) for T in range(1 << F.n)
                    if sim(S & T) != sim(S) | sim(T)), None)
        witness = None if bad is None else {"S": _states(bad[0]),
                                            "S_prime": _states(bad[1])}
        scope = "all-subsets"
    else:
        bad = next(((x, y) for x in range(size) for y in range(size)
                    if sim(rho[x] & rho[y]) != sim(rho[x]) | sim(rho[y])),
                   None)
        witness = None if bad is None else pair_witness(*bad)
        scope = "image-pairs"
    report.add("sim-de-morgan-meet", bad is None,
               witness if witness else {"scope": scope})

    bad = next(((x, y) for x in range(size) for y in range(size)
                if sim(rho[x] | rho[y]) != sim(rho[x]) & sim(rho[y])), None)
    report.add("sim-de-morgan-join", bad is None,
               None if bad is None else pair_witness(*bad))

    bad = next((x for x in range(size)
                if rho[x] & sim(rho[x]) != rho[L.bottom]), None)
    report.add("complement-meet", bad is None,
               None if bad is None else {"element": names[bad]})

    bad = next((x for x in range(size)
                if rho[x] | sim(rho[x]) != rho[L.top]), None)
    report.add("complement-join", bad is None,
               None if bad is None else {"element": names[bad]})

    bad = next(((x, y) for x in range(size) for y in range(size)
                if L.le(x, y) and sim(rho[y]) & ~sim(rho[x]) != 0), None)
    report.add("antitone", bad is None,
               None if bad is None else pair_witness(*bad))

    bad = next(((x, y) for x in range(size) for y in range(size)
                if L.le(x, y) and rho[y] != rho[x] | (rho[y] & sim(rho[x]))),
               None)
    report.add("orthomodular", bad is None,
               None if bad is None else pair_witness(*bad))

    swap_ok = (sim(rho[L.bottom]) == rho[L.top]
               and sim(rho[L.top]) == rho[L.bottom])
    report.add("bounds-swap", swap_ok,
               None if swap_ok else {"sim_of_bottom": _states(sim(rho[L.bottom])),
                                     "sim_of_top": _states(sim(rho[L.top]))})

    bad = next(((x, y) for x in range(size) for y in range(size)
                if rho[L.join[x][y]] != rho[x] | rho[y]), None)
    report.add("join-preserved", bad is None,
               None if bad is None else pair_witness(*bad))

    bad = next((x for x in range(size)
                if rho[L.bottom] & ~rho[x] != 0 or rho[x] & ~rho[L.top] != 0),
               None)
    report.add("bounds-preserved", bad is None,
               None if bad is None else {"element": names[bad]})
    return report


# --------------------------------------------------------------------------
# Search


def search_embedding(L: FiniteOML, F: KripkeFrame) -> Embedding | None:
    """Backtracking over set assignments in element-index order, candidate
    sets ascending, pruned by injectivity, the sim constraint and the meet
    constraint; assigning any element immediately forces its
    orthocomplement and all meets with already-assigned elements.  Returns
    the lexicographically first solution, or None when the space is
    exhausted.
    """
    require("embed-search-space", L.size <= 12 and F.n <= 6,
            f"|L|={L.size} (max 12), frame n={F.n} (max 6)")
    size = L.size
    nsub = 1 << F.n
    sim = [sim_op(F, S) for S in range(nsub)]
    assign: list[int | None] = [None] * size
    owner: dict[int, int] = {}

    def place(e: int, value: int, trail: list[int]) -> bool:
        queue = [(e, value)]
        while queue:
            x, v = queue.pop()
            cur = assign[x]
            if cur is not None:
                if cur != v:
                    return False
                continue
            if v in owner:
                return False
            assign[x] = v
            owner[v] = x
            trail.append(x)
            queue.append((L.ocompl[x], sim[v]))
            for y in range(size):
                vy = assign[y]
                if vy is not None:
                    queue.append((L.meet[x][y], v & vy))
        return True

    def undo(trail: list[int]) -> None:
        while trail:
            x = trail.pop()
            owner.pop(assign[x])
            assign[x] = None

    def dfs() -> bool:
        free = next((x for x in range(size) if assign[x] is None), None)
        if free is None:
            return True
        for value in range(nsub):
            trail: list[int] = []
            if place(free, value, trail) and dfs():
                return True
            undo(trail)
        return False

    if dfs():
        return Embedding(L, F, tuple(assign))
    return None


def search_frames_for(
    L: FiniteOML,
    max_states: int,
    bq_only: bool = True,
    prune_degrees: bool = False,
) -> tuple[KripkeFrame, Embedding] | None:
    """Outer loop over frames (state count ascending, relation bitmask
    ascending) feeding :func:`search_embedding`; first success wins.

    With ``bq_only`` the stream is restricted to frames where both the
    symmetry-side and Q-side subset inclusions hold.  ``prune_degrees``
    skips frames repeating an already-seen in/out-degree profile; that is
    a heuristic and can miss witnesses.
    """
    require("frame-search-states", max_states <= 5,
            f"max_states={max_states} exceeds 5")
    from .checker import bq_frame_masks

    for n in range(1, max_states + 1):
        if bq_only:
            masks = bq_frame_masks(n)
        else:
            masks = range(1 << (n * n))
        seen_profiles: set[tuple[tuple[int, int], ...]] = set()
        for mask in masks:
            frame = KripkeFrame.from_mask(n, mask)
            if prune_degrees:
                succ = frame.succ_masks()
                out_deg = [bin(s).count("1") for s in succ]
                in_deg = [sum((succ[t] >> s) & 1 for t in range(n))
                          for s in range(n)]
                profile = tuple(sorted(zip(out_deg, in_deg)))
                if profile in seen_profiles:
                    continue
                seen_profiles.add(profile)
            found = search_embedding(L, frame)
            if found is not None:
                return frame, found
    return None


# --------------------------------------------------------------------------
# Closure families


def closure_family(
    F: KripkeFrame, seeds: list[int]
) -> tuple[list[int], CertificateReport]:
    """Least family of state sets containing the seeds and closed under
    intersection and ``sim_op``, with a report on whether that family,
    ordered by inclusion with ``sim_op`` as complement, satisfies the
    lattice and orthocomplement laws."""
    require("closure-states", F.n <= 10, f"n={F.n} exceeds 10")
    for S in seeds:
        if S & ~F.full:
            raise ValueError(f"seed {S:#x} exceeds the frame")
    known: set[int] = set()
    queue = sorted(set(seeds))
    while queue:
        S = queue.pop()
        if S in known:
            continue
        known.add(S)
        fresh = [sim_op(F, S)]
        fresh.extend(S & T for T in known)
        queue.extend(c for c in fresh if c not in known)
    family = sorted(known)

    def name(S: int) -> str:
        return "{" + ",".join(str(s) for s in _states(S)) + "}"

    index = {S: i for i, S in enumerate(family)}
    leq = frozenset((index[S], index[T]) for S in family for T in family
                    if S & ~T == 0)
    ocompl = tuple(index[sim_op(F, S)] for S in family)
    bottom_mask = family[0]
    for S in family:
        bottom_mask &= S
    top_mask = 0
    for S in family:
        top_mask |= S
    bottom = index[bottom_mask]
    top = index.get(top_mask, len(family) - 1)
    data = LatticeData(tuple(name(S) for S in family), leq, ocompl,
                       bottom, top)
    report = check_oml(data)
    report.title = "closure-family"
    report.entries.insert(0, CheckEntry(
        "family", None,
        {"seeds": [_states(S) for S in sorted(set(seeds))],
         "size": len(family)}))
    return family, report


# --------------------------------------------------------------------------
# JSON format


def embedding_to_json(E: Embedding) -> dict:
    return {
        "lattice": lattice_to_json(E.lattice),
        "frame": frame_to_json(E.frame),
        "map": {E.lattice.elements[x]: _states(mask)
                for x, mask in enumerate(E.mapping)},
    }


def embedding_from_json(data: dict, base_dir: str = ".") -> Embedding:
    """Reader for ``{"lattice": ..., "frame": ..., "map": ...}``; lattice
    and frame may be inline objects or paths relative to ``base_dir``."""
    if not isinstance(data, dict):
        raise MalformedEmbedding("embedding file must be a JSON object")
    unknown = set(data) - {"lattice", "frame", "map"}
    if unknown:
        raise MalformedEmbedding(
            f"unknown keys in embedding file: {sorted(unknown)}")

    def resolve(value):
        if isinstance(value, str):
            with open(os.path.join(base_dir, value), encoding="utf-8") as fh:
                return json.load(fh)
        return value

    try:
        lattice = build_lattice(lattice_from_json(resolve(data["lattice"])))
        frame = frame_from_json(resolve(data["frame"]))
        raw_map = data["map"]
    except KeyError as exc:
        raise MalformedEmbedding(f"missing key {exc}") from None
    if not isinstance(raw_map, dict):
        raise MalformedEmbedding("map must be an object")
    unknown_elems = set(raw_map) - set(lattice.elements)
    if unknown_elems:
        raise MalformedEmbedding(f"map names unknown elements:"
                                 f" {sorted(unknown_elems)}")
    mapping = []
    for name in lattice.elements:
        if name not in raw_map:
            raise MalformedEmbedding(f"map is missing element {name!r}")
        mask = 0
        for s in raw_map[name]:
            s = int(s)
            if not 0 <= s < frame.n:
                raise MalformedEmbedding(
                    f"state {s} out of range in image of {name!r}")
            mask |= 1 << s
        mapping.append(mask)
    return Embedding(lattice, frame, tuple(mapping))


def is_bq_frame(F: KripkeFrame) -> bool:
    """Both subset inclusions: the symmetry side and the Q side."""
    return check_b_semantic(F) and check_q_semantic(F)
