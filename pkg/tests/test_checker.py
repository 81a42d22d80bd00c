"""Suite-level tests: frame enumeration, the four reports, determinism.

Counts and witnesses here were computed once by direct enumeration and
are pinned; a change in any of them means the scan order or the frame
classes moved.
"""

import json

import pytest

from qmodal import checker
from qmodal.checker import (
    SuiteConfig, bq_frame_masks, correspondence_suite, distribution_suite,
    enumerate_frames, paradox_search, translation_report,
)
from qmodal.guards import GuardExceeded


def entries(report, name):
    return [e for e in report.entries if e.name == name]


# --------------------------------------------------------------------------
# Enumeration


def test_frame_counts():
    assert sum(1 for _ in enumerate_frames(1)) == 2
    assert sum(1 for _ in enumerate_frames(2)) == 16
    assert sum(1 for _ in enumerate_frames(3)) == 512


def test_frames_ascend_by_mask():
    masks = [F.mask() for F in enumerate_frames(2)]
    assert masks == sorted(masks) == list(range(16))


def test_enumerate_guard():
    with pytest.raises(GuardExceeded, match="enumerate-frames"):
        list(enumerate_frames(6))


def test_restricted_class_masks():
    assert bq_frame_masks(1) == [1]
    assert bq_frame_masks(2) == [6, 9]      # the swap and the identity
    assert len(bq_frame_masks(3)) == 4
    assert len(bq_frame_masks(4)) == 10


def test_restricted_class_is_involution_count():
    # 1, 2, 4, 10, 26: pairings-with-fixed-points of n states
    assert [len(bq_frame_masks(n)) for n in range(1, 5)] == [1, 2, 4, 10]


def test_suite_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(frame_filter="odd")
    with pytest.raises(GuardExceeded, match="suite-states"):
        SuiteConfig(max_states=6)
    with pytest.raises(ValueError, match="sample_seed"):
        checker._suite_levels(SuiteConfig(max_states=4))


# --------------------------------------------------------------------------
# Correspondence


def test_correspondence_exhaustive_n2():
    report = correspondence_suite(SuiteConfig(max_states=2))
    checks = [e for e in report.entries if e.passed is not None]
    assert len(checks) == 54      # 18 frames, three classes each
    assert report.passed
    counts = entries(report, "class-counts")
    assert counts[0].witness == {"n": 1, "mode": "exhaustive", "frames": 2,
                                 "symmetric": 2, "serial": 1, "q_fol": 1,
                                 "b_and_q": 1}
    assert counts[1].witness == {"n": 2, "mode": "exhaustive", "frames": 16,
                                 "symmetric": 8, "serial": 9, "q_fol": 2,
                                 "b_and_q": 2}


def test_correspondence_entry_names():
    report = correspondence_suite(SuiteConfig(max_states=1))
    names = [e.name for e in report.entries if e.passed is not None]
    assert set(names) == {"b-axiom-iff-symmetric",
                          "q-axiom-iff-q-fol-iff-q-semantic",
                          "q-fol-implies-serial-iff-d-axiom"}
    # every check entry carries the frame it talks about
    assert all(e.frame is not None
               for e in report.entries if e.passed is not None)


def test_correspondence_sampled_levels_deterministic():
    cfg = SuiteConfig(max_states=4, sample_seed=11)
    a = correspondence_suite(cfg).to_lines()
    b = correspondence_suite(cfg).to_lines()
    assert a == b
    meta = entries(correspondence_suite(cfg), "class-counts")[-1].witness
    assert meta["mode"] == "sampled"
    assert meta["seed"] == 11


# --------------------------------------------------------------------------
# Distribution


def test_distribution_suite_n2():
    report = distribution_suite(SuiteConfig(max_states=2))
    checks = [e for e in report.entries if e.passed is not None]
    assert len(checks) == 37
    assert report.passed
    ce = entries(report, "box-join-converse-counterexample")[0]
    assert ce.passed
    assert ce.witness == {
        "frame": {"edges": [[0, 0], [0, 1]], "states": 2},
        "state": 0,
        "valuation": {"p": [0], "q": [1]},
    }


def test_distribution_routes_agree():
    report = distribution_suite(SuiteConfig(max_states=2))
    for e in report.entries:
        if e.name in ("box-meet-two-way", "box-join-one-way"):
            assert e.witness["formula_route"] == e.witness["subset_route"]


# --------------------------------------------------------------------------
# Paradox search


def test_paradox_not_found_on_restricted_class():
    witness, report = paradox_search(SuiteConfig(max_states=3,
                                                 frame_filter="b+q"))
    assert witness is None
    entry = entries(report, "paradox-witness")[0]
    assert entry.passed is None
    assert entry.witness == {"found": False, "exhaustive": True,
                             "frames_examined": 7, "filter": "b+q"}
    assert entries(report, "converse-implication-valid-everywhere")[0].passed


def test_paradox_witness_on_unrestricted_frames():
    witness, report = paradox_search(SuiteConfig(max_states=2,
                                                 frame_filter="none"))
    assert witness is not None
    model, state = witness
    assert model.frame.mask() == 3            # edges (0,0), (0,1)
    assert model.valuation == {"p": 3, "q": 1, "r": 2}
    assert state == 0
    entry = entries(report, "paradox-witness")[0]
    assert entry.passed                        # both evaluation routes agree
    assert entry.witness["formulas"] == {
        "[]p": True, "[](q | r)": True,
        "[](p & q)": False, "[](p & r)": False,
    }
    assert entry.witness["reverified"] == {"recursive": True,
                                           "extension": True}


def test_paradox_frames_searched_entries():
    _, report = paradox_search(SuiteConfig(max_states=2, frame_filter="b+q"))
    searched = entries(report, "frames-searched")
    assert [e.witness["frames"] for e in searched] == [1, 2]
    assert all(e.witness["mode"] == "exhaustive" for e in searched)


def test_paradox_serial_filter_runs():
    witness, report = paradox_search(SuiteConfig(max_states=2,
                                                 frame_filter="serial"))
    # serial frames include the witness frame above
    assert witness is not None
    assert report.passed


# --------------------------------------------------------------------------
# Translation report


@pytest.fixture(scope="module")
def translation():
    return translation_report(SuiteConfig(max_states=3))


def test_translation_report_axioms_lattice_valid(translation):
    axioms = {e.name: e.witness for e in translation.entries
              if e.name.startswith("axiom-")}
    assert len(axioms) == 12
    for name, witness in axioms.items():
        assert set(witness["ql_valid"]) == {"boolean2", "boolean3", "mo2",
                                            "mo3", "mo4"}
        assert all(witness["ql_valid"].values()), name


def test_translation_report_frame_validity(translation):
    """Translated schemes survive only on the identity frames: the swap
    frame already falsifies them, which is the point of the report."""
    for e in translation.entries:
        if not e.name.startswith("axiom-"):
            continue
        assert e.witness["frames"] == 7
        assert e.witness["bq_valid_frames"] == 3
        assert e.witness["first_invalid_frame"] == {
            "edges": [[0, 1], [1, 0]], "states": 2}


def test_translation_report_dual_forms(translation):
    duals = {e.name: e.witness for e in translation.entries
             if not e.name.startswith("axiom-")}
    assert set(duals) == {"box-diamond", "diamond-box", "modal-K",
                          "modal-BQ", "d-axiom"}
    for witness in duals.values():
        assert witness["bq_valid_frames"] == witness["frames"] == 7


def test_translation_report_is_informational(translation):
    assert all(e.passed is None for e in translation.entries)
    assert translation.passed      # nothing asserted, nothing failed


# --------------------------------------------------------------------------
# Determinism


def test_reports_are_byte_identical_across_runs():
    cfg = SuiteConfig(max_states=2)
    assert correspondence_suite(cfg).to_lines() == \
        correspondence_suite(cfg).to_lines()
    assert distribution_suite(cfg).to_lines() == \
        distribution_suite(cfg).to_lines()


def test_thread_count_does_not_change_output():
    cfg = SuiteConfig(max_states=3)
    assert correspondence_suite(cfg, threads=1).to_lines() == \
        correspondence_suite(cfg, threads=4).to_lines()
    assert distribution_suite(cfg, threads=1).to_lines() == \
        distribution_suite(cfg, threads=4).to_lines()
    a = paradox_search(SuiteConfig(max_states=2, frame_filter="none"),
                       threads=1)[1].to_lines()
    b = paradox_search(SuiteConfig(max_states=2, frame_filter="none"),
                       threads=4)[1].to_lines()
    assert a == b


def test_report_lines_are_json_with_stable_keys():
    report = distribution_suite(SuiteConfig(max_states=1))
    for line in report.to_lines():
        doc = json.loads(line)
        assert list(doc) == sorted(doc)
        assert doc["suite"] == "distribution"
        assert doc["verdict"] in ("pass", "fail", "info")
