"""Kripke frames, the induced set operators, and modal evaluation."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmodal import baoframe as bf
from qmodal import formula as fm
from qmodal.baoframe import (
    KripkeFrame, KripkeModel, bq_valid_on_frame, check_b_semantic,
    check_fact1, check_fact2, check_q_fol, check_q_semantic, check_seriality,
    check_symmetry, complement, eval_bq, extension, frame_from_json,
    frame_to_json, nec_op, pos_op, sim_op, valuation_from_json,
    valuation_to_json,
)
from qmodal.guards import GuardExceeded

HALF = KripkeFrame.from_pairs(2, [(0, 0), (0, 1)])   # state 1 is a dead end
CYCLE = KripkeFrame.from_pairs(2, [(0, 1), (1, 0)])
ID2 = KripkeFrame.from_pairs(2, [(0, 0), (1, 1)])


def frames(max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(0, (1 << (n * n)) - 1).map(
            lambda m: KripkeFrame.from_mask(n, m)))


# --------------------------------------------------------------------------
# Construction


def test_mask_round_trip():
    F = KripkeFrame.from_mask(2, 9)
    assert F == ID2
    assert F.mask() == 9
    assert sorted(F.edges) == [(0, 0), (1, 1)]


def test_frame_validation():
    with pytest.raises(ValueError):
        KripkeFrame.from_pairs(2, [(0, 2)])
    with pytest.raises(ValueError):
        KripkeFrame.from_pairs(-1, [])
    with pytest.raises(ValueError):
        KripkeFrame.from_pairs(65, [])


def test_succ_masks():
    assert HALF.succ_masks() == (3, 0)
    assert CYCLE.succ_masks() == (2, 1)


# --------------------------------------------------------------------------
# Operators


@pytest.mark.parametrize("S, pos, nec, sim", [
    (0b00, 0b00, 0b10, 0b01),
    (0b01, 0b01, 0b10, 0b01),
    (0b10, 0b01, 0b10, 0b01),
    (0b11, 0b01, 0b11, 0b00),
])
def test_operator_table_on_half_frame(S, pos, nec, sim):
    assert pos_op(HALF, S) == pos
    assert nec_op(HALF, S) == nec
    assert sim_op(HALF, S) == sim


def test_sim_on_cycle_singleton():
    # each state's sole successor is the other one
    assert sim_op(CYCLE, 0b01) == 0b01
    assert sim_op(CYCLE, sim_op(CYCLE, 0b01)) == 0b01


@given(frames(), st.integers(0, (1 << 4) - 1))
def test_nec_pos_duality(F, S):
    S &= F.full
    assert nec_op(F, S) == complement(F, pos_op(F, complement(F, S)))
    assert pos_op(F, S) == complement(F, nec_op(F, complement(F, S)))
    assert sim_op(F, S) == pos_op(F, complement(F, S))


@given(frames(), st.integers(0, 15), st.integers(0, 15))
def test_pos_additive_nec_multiplicative(F, S, T):
    S &= F.full
    T &= F.full
    assert pos_op(F, S | T) == pos_op(F, S) | pos_op(F, T)
    assert nec_op(F, S & T) == nec_op(F, S) & nec_op(F, T)


def test_pos_preserves_empty_nec_preserves_full():
    for mask in range(1 << 4):
        F = KripkeFrame.from_mask(2, mask)
        assert pos_op(F, 0) == 0
        assert nec_op(F, F.full) == F.full


# --------------------------------------------------------------------------
# Frame properties, cross-checked against direct definitions


def _frames_upto(max_n):
    for n in range(1, max_n + 1):
        for mask in range(1 << (n * n)):
            yield KripkeFrame.from_mask(n, mask)


def test_symmetry_seriality_against_definitions():
    for F in _frames_upto(3):
        sym = all(((b, a) in F.edges) for a, b in F.edges)
        serial = all(any((s, t) in F.edges for t in range(F.n))
                     for s in range(F.n))
        assert check_symmetry(F) == sym
        assert check_seriality(F) == serial


def test_q_fol_against_definition():
    for F in _frames_upto(3):
        expected = all(
            any((s, t) in F.edges
                and all(u == s for u in range(F.n) if (t, u) in F.edges)
                for t in range(F.n))
            for s in range(F.n))
        assert check_q_fol(F) == expected


def test_b_semantic_iff_symmetric():
    for F in _frames_upto(3):
        assert check_b_semantic(F) == check_symmetry(F)


def test_q_semantic_iff_q_fol():
    for F in _frames_upto(3):
        assert check_q_semantic(F) == check_q_fol(F)


def test_q_fol_examples():
    assert check_q_fol(ID2)
    assert check_q_fol(CYCLE)   # each state's only successor sees just it
    assert not check_q_fol(HALF)
    assert not check_q_fol(KripkeFrame.from_pairs(1, []))


def test_fact1_report():
    for F in (HALF, CYCLE, ID2, KripkeFrame.from_mask(3, 0b101010101)):
        report = check_fact1(F)
        assert [e.name for e in report.entries] == ["relation-recoverable-from-nec"]
        assert report.passed


def test_fact2_exhaustive_mode():
    report = check_fact2(HALF)
    entry = report.entries[0]
    assert entry.name == "pos-additive-over-union"
    assert entry.passed
    assert entry.witness == {"mode": "exhaustive", "pairs": 16}


def test_fact2_sampled_mode_deterministic():
    ring = KripkeFrame.from_pairs(10, [(i, (i + 1) % 10) for i in range(10)])
    first = check_fact2(ring, sample_seed=7).entries[0]
    second = check_fact2(ring, sample_seed=7).entries[0]
    assert first.witness == {"mode": "sampled", "pairs": 100000, "seed": 7}
    assert first == second
    assert first.passed


# --------------------------------------------------------------------------
# Evaluation


def test_eval_bq_examples():
    M = KripkeModel(HALF, {"p": 0b01})
    box_p = fm.parse_bq("[]p")
    assert not eval_bq(M, 0, box_p)     # state 0 also sees 1
    assert eval_bq(M, 1, box_p)         # vacuously: no successors
    assert eval_bq(M, 0, fm.parse_bq("<>p"))
    assert not eval_bq(M, 1, fm.parse_bq("<>p"))
    assert eval_bq(M, 0, fm.parse_bq("true"))
    assert not eval_bq(M, 0, fm.parse_bq("false"))


def test_extension_examples():
    M = KripkeModel(HALF, {"p": 0b01})
    assert extension(M, fm.parse_bq("[]p")) == 0b10
    assert extension(M, fm.parse_bq("<>p")) == 0b01
    assert extension(M, fm.parse_bq("!p")) == 0b10
    assert extension(M, fm.parse_bq("p <-> <>p")) == 0b11


@given(frames(max_n=3), st.data())
def test_eval_matches_extension(F, data):
    names = ("p", "q")
    val = {x: data.draw(st.integers(0, F.full), label=x) for x in names}
    f = data.draw(_bq_ast(names), label="formula")
    M = KripkeModel(F, val)
    ext = extension(M, f)
    for s in range(F.n):
        assert eval_bq(M, s, f) == bool((ext >> s) & 1)


def _bq_ast(names):
    leaf = st.one_of(st.sampled_from([fm.Atom(x) for x in names]),
                     st.just(fm.Top()), st.just(fm.Bot()))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            sub.map(fm.Neg), sub.map(fm.Box), sub.map(fm.Diamond),
            st.tuples(sub, sub).map(lambda t: fm.And(*t)),
            st.tuples(sub, sub).map(lambda t: fm.Or(*t)),
            st.tuples(sub, sub).map(lambda t: fm.Imp(*t)),
            st.tuples(sub, sub).map(lambda t: fm.Iff(*t)),
        ),
        max_leaves=8)


def test_eval_unknown_atom_raises():
    M = KripkeModel(ID2, {})
    with pytest.raises(ValueError):
        eval_bq(M, 0, fm.parse_bq("p"))
    with pytest.raises(ValueError):
        extension(M, fm.parse_bq("p"))


def test_eval_state_out_of_range():
    M = KripkeModel(ID2, {"p": 1})
    with pytest.raises(ValueError):
        eval_bq(M, 2, fm.parse_bq("p"))


# --------------------------------------------------------------------------
# Frame validity


def test_b_axiom_valid_iff_symmetric():
    B = fm.parse_bq("p -> []<>p")
    for F in _frames_upto(3):
        assert bq_valid_on_frame(F, B)[0] == check_symmetry(F)


def test_q_axiom_valid_iff_q_fol():
    Q = fm.parse_bq("[]<>p -> p")
    for F in _frames_upto(3):
        assert bq_valid_on_frame(F, Q)[0] == check_q_fol(F)


def test_d_axiom_valid_iff_serial():
    D = fm.parse_bq("!([]false)")
    for F in _frames_upto(3):
        assert bq_valid_on_frame(F, D)[0] == check_seriality(F)


def test_first_falsifier_is_lexicographic():
    """The falsifying witness is the first in valuation-tuple-then-state
    order, matching a plain nested loop."""
    f = fm.parse_bq("[](p | q) -> []p | []q")
    ok, witness = bq_valid_on_frame(HALF, f)
    assert not ok
    assert witness == ({"p": 0b01, "q": 0b10}, 0)

    found = None
    for p in range(4):
        for q in range(4):
            M = KripkeModel(HALF, {"p": p, "q": q})
            for s in range(2):
                if not eval_bq(M, s, f):
                    found = ({"p": p, "q": q}, s)
                    break
            if found:
                break
        if found:
            break
    assert witness == found


def test_valid_formula_has_no_witness():
    ok, witness = bq_valid_on_frame(CYCLE, fm.parse_bq("[](p -> q) -> ([]p -> []q)"))
    assert ok and witness is None


# --------------------------------------------------------------------------
# Serialization


def test_frame_json_round_trip():
    doc = frame_to_json(HALF)
    assert doc == {"states": 2, "edges": [[0, 0], [0, 1]]}
    assert frame_from_json(doc) == HALF


def test_frame_json_strict_keys():
    with pytest.raises(ValueError):
        frame_from_json({"states": 2, "edges": [], "name": "x"})
    with pytest.raises(ValueError):
        frame_from_json({"states": 2})
    with pytest.raises(ValueError):
        frame_from_json({"states": 2, "edges": [[0, 5]]})


def test_valuation_json_round_trip():
    val = {"p": 0b101, "q": 0b010}
    F = KripkeFrame.from_mask(3, 0)
    doc = valuation_to_json(val)
    assert doc == {"p": [0, 2], "q": [1]}
    assert valuation_from_json(doc, F) == val


def test_valuation_json_rejects_out_of_range():
    with pytest.raises(ValueError):
        valuation_from_json({"p": [3]}, ID2)


# --------------------------------------------------------------------------
# Guards


def test_semantic_guards_and_override(monkeypatch):
    big = KripkeFrame.from_pairs(11, [(i, i) for i in range(11)])
    with pytest.raises(GuardExceeded, match="b-semantic-states"):
        check_b_semantic(big)
    with pytest.raises(GuardExceeded, match="q-semantic-states"):
        check_q_semantic(big)
    monkeypatch.setenv("QMODAL_GUARD_OVERRIDE", "1")
    assert check_b_semantic(big)
    assert check_q_semantic(big)


def test_fact_guards():
    big = KripkeFrame.from_pairs(13, [])
    with pytest.raises(GuardExceeded, match="fact1-states"):
        check_fact1(big)
    with pytest.raises(GuardExceeded, match="fact2-states"):
        check_fact2(KripkeFrame.from_pairs(11, []))


def test_bq_valid_valuation_guard():
    f = fm.parse_bq("p & q & r & s & t & u & v & w")
    with pytest.raises(GuardExceeded, match="bq-valid-valuations"):
        bq_valid_on_frame(KripkeFrame.from_pairs(3, []), f)
