"""Backend agreement and kernel correctness against the per-frame checks.

The numba and numpy implementations must return identical flag arrays;
both must agree with the straightforward per-frame predicates from the
frame module.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from qmodal import baoframe as bf
from qmodal import kernels
from qmodal.baoframe import KripkeFrame
from qmodal.kernels import numpy_impl

try:
    from qmodal.kernels import numba_impl
except ImportError:
    numba_impl = None

needs_numba = pytest.mark.skipif(numba_impl is None, reason="numba unavailable")

KERNELS = ["classify_frames", "semantic_flags", "op_distribution_flags",
           "fact1_all"]


def _all_masks(n):
    return np.arange(1 << (n * n), dtype=np.int64)


def _sampled_masks(n, count, seed):
    rng = np.random.default_rng(seed)
    return np.unique(rng.integers(0, 1 << (n * n), size=count, dtype=np.int64))


# --------------------------------------------------------------------------
# Backend agreement


@needs_numba
@pytest.mark.parametrize("name", KERNELS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_backends_agree_exhaustively(name, n):
    masks = _all_masks(n)
    a = getattr(numpy_impl, name)(n, masks)
    b = getattr(numba_impl, name)(n, masks)
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("name, n, count", [
    ("classify_frames", 4, 50_000),
    ("classify_frames", 5, 20_000),
    ("fact1_all", 4, 5_000),
    ("fact1_all", 5, 2_000),
    ("semantic_flags", 4, 500),
    ("op_distribution_flags", 4, 500),
])
def test_backends_agree_on_samples(name, n, count):
    masks = _sampled_masks(n, count, seed=42 + n)
    a = getattr(numpy_impl, name)(n, masks)
    b = getattr(numba_impl, name)(n, masks)
    assert np.array_equal(a, b)


# --------------------------------------------------------------------------
# Kernels versus the per-frame predicates


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classify_matches_frame_checks(n):
    masks = _all_masks(n)
    flags = kernels.classify_frames(n, masks)
    for mask, f in zip(masks, flags):
        F = KripkeFrame.from_mask(n, int(mask))
        assert bool(f & 1) == bf.check_symmetry(F)
        assert bool(f & 2) == bf.check_seriality(F)
        assert bool(f & 4) == bf.check_q_fol(F)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_semantic_flags_match_frame_checks(n):
    masks = _all_masks(n)
    flags = kernels.semantic_flags(n, masks)
    for mask, f in zip(masks, flags):
        F = KripkeFrame.from_mask(n, int(mask))
        assert bool(f & 1) == bf.check_b_semantic(F)
        assert bool(f & 2) == bf.check_q_semantic(F)
        invol = all(bf.sim_op(F, bf.sim_op(F, S)) == S
                    for S in range(1 << n))
        assert bool(f & 4) == invol
        demorgan = all(
            bf.sim_op(F, S & T) == (bf.sim_op(F, S) | bf.sim_op(F, T))
            for S in range(1 << n) for T in range(1 << n))
        assert bool(f & 8) == demorgan


@pytest.mark.parametrize("n", [1, 2, 3])
def test_op_distribution_flags_match_set_laws(n):
    masks = _all_masks(n)
    flags = kernels.op_distribution_flags(n, masks)
    # additivity of pos and multiplicativity of nec hold on every frame
    assert np.all(flags & 1)
    assert np.all(flags & 2)
    assert np.all(flags & 4)  # half of the join direction is universal too
    for mask in masks[:: max(1, masks.size // 64)]:
        F = KripkeFrame.from_mask(n, int(mask))
        for S in range(1 << n):
            for T in range(1 << n):
                assert bf.pos_op(F, S | T) == bf.pos_op(F, S) | bf.pos_op(F, T)
                nec_st = bf.nec_op(F, S) | bf.nec_op(F, T)
                assert nec_st & ~bf.nec_op(F, S | T) & F.full == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fact1_kernel_matches_report(n):
    masks = _all_masks(n)
    flags = kernels.fact1_all(n, masks)
    assert np.all(flags == 1)
    for mask in masks[:: max(1, masks.size // 32)]:
        assert bf.check_fact1(KripkeFrame.from_mask(n, int(mask))).passed


def test_classify_counts_at_n3():
    flags = kernels.classify_frames(3, _all_masks(3))
    assert int(np.count_nonzero(flags & 1)) == 64    # symmetric
    assert int(np.count_nonzero(flags & 2)) == 343   # serial
    # the q condition forces one dedicated successor per state, so the
    # q frames are the involution graphs: all symmetric, I(3) = 4 of them
    assert int(np.count_nonzero(flags & 4)) == 4
    assert int(np.count_nonzero((flags & 5) == 5)) == 4


def test_empty_input():
    empty = np.empty(0, dtype=np.int64)
    for name in KERNELS:
        out = getattr(kernels, name)(2, empty)
        assert out.shape == (0,)


# --------------------------------------------------------------------------
# Dispatch


def _backend_with_env(env_value):
    env = dict(os.environ)
    env.pop("QMODAL_DISABLE_NUMBA", None)
    if env_value is not None:
        env["QMODAL_DISABLE_NUMBA"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from qmodal import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip()


def test_env_flag_selects_numpy_backend():
    assert _backend_with_env("1") == "numpy"


@needs_numba
def test_default_backend_is_numba():
    assert _backend_with_env(None) == "numba"
