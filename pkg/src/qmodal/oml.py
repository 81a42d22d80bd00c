"""Finite orthomodular lattices: construction, law checking, validity.

A lattice candidate carries elements, the order relation, an
orthocomplement map and the two bounds; meet and join tables are derived
from the order, never supplied.  ``check_oml`` reports one entry per law
with a counterexample on failure.  Validity of a formula means value 1
(top) under every valuation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import formula as fm
from .guards import require
from .report import CertificateReport

LATTICE_JSON_KEYS = {"elements", "leq", "ocompl", "bottom", "top"}


class MalformedLattice(ValueError):
    """Input whose shape is broken (dangling names, non-total ocompl),
    as opposed to a well-formed lattice that violates a law."""


@dataclass(frozen=True)
class LatticeData:
    """A lattice candidate with resolved indices, not yet validated."""

    elements: tuple[str, ...]
    leq: frozenset[tuple[int, int]]
    ocompl: tuple[int, ...]
    bottom: int
    top: int


@dataclass(frozen=True, eq=False)
class FiniteOML:
    """A validated bounded lattice with a total complement map.

    The orthocomplement laws are certified separately by ``check_oml``;
    construction only guarantees the order-theoretic structure.
    """

    elements: tuple[str, ...]
    leq: frozenset[tuple[int, int]]
    ocompl: tuple[int, ...]
    bottom: int
    top: int
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def le(self, x: int, y: int) -> bool:
        return (x, y) in self.leq

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise MalformedLattice(f"unknown element {name!r}") from None


def _validate_shape(data: LatticeData) -> None:
    size = len(data.elements)
    if size == 0:
        raise MalformedLattice("no elements")
    if len(set(data.elements)) != size:
        raise MalformedLattice("duplicate element names")
    if len(data.ocompl) != size:
        raise MalformedLattice("ocompl is not total")
    for x in data.ocompl:
        if not 0 <= x < size:
            raise MalformedLattice(f"ocompl index {x} out of range")
    for (x, y) in data.leq:
        if not (0 <= x < size and 0 <= y < size):
            raise MalformedLattice(f"leq pair ({x}, {y}) out of range")
    if not (0 <= data.bottom < size and 0 <= data.top < size):
        raise MalformedLattice("bottom or top out of range")
    require("lattice-size", size <= 64, f"|L|={size} exceeds 64")


def _glb(data: LatticeData, x: int, y: int) -> int | None:
    size = len(data.elements)
    lower = [z for z in range(size)
             if (z, x) in data.leq and (z, y) in data.leq]
    for z in lower:
        if all((w, z) in data.leq for w in lower):
            return z
    return None


def _lub(data: LatticeData, x: int, y: int) -> int | None:
    size = len(data.elements)
    upper = [z for z in range(size)
             if (x, z) in data.leq and (y, z) in data.leq]
    for z in upper:
        if all((z, w) in data.leq for w in upper):
            return z
    return None


def _order_entries(data: LatticeData) -> tuple[CertificateReport, bool]:
    """Order-theoretic entries: reflexive, antisymmetric, transitive,
    meets/joins exist, bounds."""
    report = CertificateReport("lattice-order")
    size = len(data.elements)
    missing = [x for x in range(size) if (x, x) not in data.leq]
    report.add("reflexive", not missing,
               None if not missing else {"element": missing[0]})
    anti = next(((x, y) for (x, y) in data.leq
                 if x != y and (y, x) in data.leq), None)
    report.add("antisymmetric", anti is None,
               None if anti is None else {"pair": list(anti)})
    trans = None
    for (x, y) in data.leq:
        for z in range(size):
            if (y, z) in data.leq and (x, z) not in data.leq:
                trans = {"x": x, "y": y, "z": z}
                break
        if trans:
            break
    report.add("transitive", trans is None, trans)
    no_meet = next(((x, y) for x in range(size) for y in range(size)
                    if _glb(data, x, y) is None), None)
    report.add("meets-exist", no_meet is None,
               None if no_meet is None else {"pair": list(no_meet)})
    no_join = next(((x, y) for x in range(size) for y in range(size)
                    if _lub(data, x, y) is None), None)
    report.add("joins-exist", no_join is None,
               None if no_join is None else {"pair": list(no_join)})
    unbounded = next((x for x in range(size)
                      if (data.bottom, x) not in data.leq
                      or (x, data.top) not in data.leq), None)
    report.add("bounds", unbounded is None,
               None if unbounded is None else {"element": unbounded})
    return report, report.passed


def build_lattice(data: LatticeData) -> FiniteOML:
    """Validate the order structure and derive the meet/join tables."""
    _validate_shape(data)
    order, ok = _order_entries(data)
    if not ok:
        bad = order.failures()[0]
        raise ValueError(f"not a bounded lattice: {bad.name} fails"
                         f" (witness {bad.witness})")
    size = len(data.elements)
    meet = tuple(tuple(_glb(data, x, y) for y in range(size))
                 for x in range(size))
    join = tuple(tuple(_lub(data, x, y) for y in range(size))
                 for x in range(size))
    return FiniteOML(data.elements, data.leq, data.ocompl,
                     data.bottom, data.top, meet, join)


def check_oml(data: LatticeData) -> CertificateReport:
    """One entry per lattice and orthocomplement law.

    Malformed shapes raise :class:`MalformedLattice`; law violations come
    back as failing entries with a concrete counterexample.
    """
    _validate_shape(data)
    report, order_ok = _order_entries(data)
    report.title = "oml-laws"
    ortho_laws = ["involution", "disjointness", "exhaustiveness",
                  "antitonicity", "de-morgan", "orthomodularity"]
    if not order_ok:
        for law in ortho_laws:
            report.add(law, False, {"reason": "order laws failed; not evaluated"})
        return report
    L = build_lattice(data)
    names = L.elements
    size = L.size

    bad = next((x for x in range(size) if L.ocompl[L.ocompl[x]] != x), None)
    report.add("involution", bad is None,
               None if bad is None else {"element": names[bad]})

    bad = next((x for x in range(size)
                if L.meet[x][L.ocompl[x]] != L.bottom), None)
    report.add("disjointness", bad is None,
               None if bad is None else {"element": names[bad]})

    bad = next((x for x in range(size)
                if L.join[x][L.ocompl[x]] != L.top), None)
    report.add("exhaustiveness", bad is None,
               None if bad is None else {"element": names[bad]})

    pair = next(((x, y) for x in range(size) for y in range(size)
                 if L.le(x, y) and not L.le(L.ocompl[y], L.ocompl[x])), None)
    report.add("antitonicity", pair is None,
               None if pair is None else {"pair": [names[pair[0]],
                                                   names[pair[1]]]})

    pair = next(((x, y) for x in range(size) for y in range(size)
                 if L.join[x][y]
                 != L.ocompl[L.meet[L.ocompl[x]][L.ocompl[y]]]), None)
    report.add("de-morgan", pair is None,
               None if pair is None else {"pair": [names[pair[0]],
                                                   names[pair[1]]]})

    pair = next(((x, y) for x in range(size) for y in range(size)
                 if L.le(x, y)
                 and y != L.join[x][L.meet[y][L.ocompl[x]]]), None)
    report.add("orthomodularity", pair is None,
               None if pair is None else {"pair": [names[pair[0]],
                                                   names[pair[1]]]})
    return report


def as_data(L: FiniteOML) -> LatticeData:
    return LatticeData(L.elements, L.leq, L.ocompl, L.bottom, L.top)


# --------------------------------------------------------------------------
# Fixtures


def gen_boolean(k: int) -> FiniteOML:
    """The powerset lattice of a k-element set, with set complement.

    Elements are named 0, single letters, letter pairs, ..., 1; ordered by
    cardinality then bitmask, so 0 is index 0 and 1 the last index.
    """
    if not 0 <= k <= 4:
        raise ValueError(f"gen_boolean expects 0 <= k <= 4, got {k}")
    subsets = sorted(range(1 << k), key=lambda s: (bin(s).count("1"), s))
    full = (1 << k) - 1

    def name(s: int) -> str:
        if s == full:
            return "1"
        if s == 0:
            return "0"
        return "".join(chr(97 + i) for i in range(k) if (s >> i) & 1)

    index = {s: i for i, s in enumerate(subsets)}
    leq = frozenset((index[s], index[t]) for s in subsets for t in subsets
                    if s & ~t == 0)
    ocompl = tuple(index[full & ~s] for s in subsets)
    data = LatticeData(tuple(name(s) for s in subsets), leq, ocompl,
                       index[0], index[full])
    return build_lattice(data)


def gen_mo(k: int) -> FiniteOML:
    """The lattice with bounds 0, 1 and k incomparable complement pairs
    a, a', b, b', ...; the smallest non-distributive cases for k >= 2."""
    if not 1 <= k <= 8:
        raise ValueError(f"gen_mo expects 1 <= k <= 8, got {k}")
    names = ["0"]
    for i in range(k):
        names.append(chr(97 + i))
        names.append(chr(97 + i) + "'")
    names.append("1")
    size = len(names)
    bottom, top = 0, size - 1
    pairs = {(x, x) for x in range(size)}
    for x in range(size):
        pairs.add((bottom, x))
        pairs.add((x, top))
    ocompl = [top] + [0] * (size - 2) + [bottom]
    for i in range(k):
        ocompl[1 + 2 * i] = 2 + 2 * i
        ocompl[2 + 2 * i] = 1 + 2 * i
    data = LatticeData(tuple(names), frozenset(pairs), tuple(ocompl),
                       bottom, top)
    return build_lattice(data)


# --------------------------------------------------------------------------
# Evaluation and validity


def eval_ql(L: FiniteOML, valuation: dict[str, int], f: fm.QLFormula) -> int:
    """Value of f in L: ``~`` is ocompl, ``&`` meet, ``|`` join; derived
    connectives are expanded first."""
    g = f if fm.is_core(f) else fm.expand_ql(f)

    def ev(node) -> int:
        if isinstance(node, fm.Atom):
            try:
                x = valuation[node.name]
            except KeyError:
                raise ValueError(f"unbound atom {node.name!r}") from None
            if not 0 <= x < L.size:
                raise ValueError(f"valuation of {node.name!r} out of range")
            return x
        if isinstance(node, fm.QNeg):
            return L.ocompl[ev(node.child)]
        if isinstance(node, fm.QMeet):
            return L.meet[ev(node.left)][ev(node.right)]
        if isinstance(node, fm.QJoin):
            return L.join[ev(node.left)][ev(node.right)]
        raise TypeError(f"unexpected node after expansion: {node!r}")

    return ev(g)


def ql_valid(
    L: FiniteOML, f: fm.QLFormula
) -> tuple[bool, dict[str, int] | None]:
    """True iff f evaluates to top under every valuation; otherwise the
    index-lexicographically first falsifying valuation."""
    atoms = fm.atom_names(f)
    k = len(atoms)
    cost = L.size ** k
    require("ql-valid-valuations", cost <= 10_000_000,
            f"|L|^#atoms = {L.size}^{k} = {cost} valuations exceeds 10^7")
    g = fm.expand_ql(f)
    for values in itertools.product(range(L.size), repeat=k):
        val = dict(zip(atoms, values))
        if eval_ql(L, val, g) != L.top:
            return False, val
    return True, None


def find_distributivity_failures(L: FiniteOML) -> list[tuple[int, int, int]]:
    """All (x, y, z) with meet(x, join(y, z)) != join(meet(x, y),
    meet(x, z)), in index-lexicographic order."""
    out = []
    for x in range(L.size):
        for y in range(L.size):
            for z in range(L.size):
                lhs = L.meet[x][L.join[y][z]]
                rhs = L.join[L.meet[x][y]][L.meet[x][z]]
                if lhs != rhs:
                    out.append((x, y, z))
    return out


# --------------------------------------------------------------------------
# JSON format


def lattice_to_json(L: FiniteOML | LatticeData) -> dict:
    names = L.elements
    return {
        "elements": list(names),
        "leq": sorted([names[x], names[y]] for (x, y) in L.leq if x != y),
        "ocompl": {names[x]: names[y] for x, y in enumerate(L.ocompl)},
        "bottom": names[L.bottom],
        "top": names[L.top],
    }


def lattice_from_json(data: dict) -> LatticeData:
    """Strict reader: exactly the five documented keys, names must resolve,
    reflexive pairs are implied and added here."""
    if not isinstance(data, dict):
        raise MalformedLattice("lattice file must be a JSON object")
    unknown = set(data) - LATTICE_JSON_KEYS
    if unknown:
        raise MalformedLattice(f"unknown keys in lattice file: {sorted(unknown)}")
    missing = LATTICE_JSON_KEYS - set(data)
    if missing:
        raise MalformedLattice(f"missing keys in lattice file: {sorted(missing)}")
    elements = data["elements"]
    if (not isinstance(elements, list)
            or not all(isinstance(e, str) for e in elements)):
        raise MalformedLattice("elements must be a list of names")
    index = {name: i for i, name in enumerate(elements)}
    if len(index) != len(elements):
        raise MalformedLattice("duplicate element names")

    def resolve(name) -> int:
        if not isinstance(name, str) or name not in index:
            raise MalformedLattice(f"unknown element {name!r}")
        return index[name]

    leq = {(i, i) for i in range(len(elements))}
    if not isinstance(data["leq"], list):
        raise MalformedLattice("leq must be a list of pairs")
    for pair in data["leq"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise MalformedLattice(f"bad leq pair {pair!r}")
        leq.add((resolve(pair[0]), resolve(pair[1])))
    ocompl_map = data["ocompl"]
    if not isinstance(ocompl_map, dict):
        raise MalformedLattice("ocompl must be an object")
    ocompl = [None] * len(elements)
    for src, dst in ocompl_map.items():
        ocompl[resolve(src)] = resolve(dst)
    if any(x is None for x in ocompl):
        missing_name = elements[ocompl.index(None)]
        raise MalformedLattice(f"ocompl is not total: missing {missing_name!r}")
    return LatticeData(tuple(elements), frozenset(leq), tuple(ocompl),
                       resolve(data["bottom"]), resolve(data["top"]))
