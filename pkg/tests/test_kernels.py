"""Compiled-extension / pure-Python kernel equivalence."""

import os
import random
import subprocess
import sys
from array import array

import pytest

from antmesh_sim import kernels
from antmesh_sim import _kernels_py as pure

compiled = pytest.importorskip(
    "antmesh_sim._kernels", reason="compiled kernels not built"
)


def random_case(rng):
    n = rng.randrange(1, 9)
    col = array("d", [rng.uniform(0.0, 1.0) for _ in range(n)])
    tot = sum(col) or 1.0
    for i in range(n):
        col[i] /= tot
    u = rng.random()
    p0 = rng.choice([0.0, 0.3, 0.8, 1.0, rng.random()])
    skip = rng.randrange(-1, n)
    mask = bytes(rng.randrange(2) for _ in range(n))
    return col, u, p0, skip, mask


def test_select_index_parity():
    rng = random.Random(99)
    for _ in range(20_000):
        col, u, p0, skip, _ = random_case(rng)
        assert compiled.select_index(col, u, p0, skip) == pure.select_index(
            col, u, p0, skip
        )


def test_select_index_masked_parity():
    rng = random.Random(100)
    for _ in range(20_000):
        col, u, p0, _, mask = random_case(rng)
        assert compiled.select_index_masked(
            col, u, p0, mask
        ) == pure.select_index_masked(col, u, p0, mask)


def test_reinforce_parity_bitwise():
    rng = random.Random(101)
    for _ in range(5_000):
        col, _, _, _, _ = random_case(rng)
        via = rng.randrange(len(col))
        dp = rng.uniform(0.0, 1.0)
        a, b = array("d", col), array("d", col)
        compiled.reinforce(a, via, dp)
        pure.reinforce(b, via, dp)
        assert a.tobytes() == b.tobytes()


def test_normalize_parity_bitwise():
    rng = random.Random(102)
    for _ in range(5_000):
        n = rng.randrange(1, 9)
        col = array("d", [rng.uniform(0.0, 3.0) for _ in range(n)])
        a, b = array("d", col), array("d", col)
        compiled.normalize(a)
        pure.normalize(b)
        assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("impl", [pure, compiled])
def test_select_edge_cases(impl):
    empty = array("d")
    assert impl.select_index(empty, 0.5, 0.8, -1) == -1
    assert impl.select_index_masked(empty, 0.5, 0.8, b"") == -1

    col = array("d", [0.25, 0.5, 0.25])
    assert impl.select_index(col, 0.1, 0.8, -1) == 1
    assert impl.select_index(col, 0.1, 0.8, 1) == 0  # argmax among the rest
    # Single eligible row always wins the explore draw.
    assert impl.select_index_masked(col, 0.99, 0.8, b"\x00\x00\x01") == 2
    assert impl.select_index_masked(col, 0.99, 0.8, b"\x00\x00\x00") == -1

    # Zero-mass eligible set falls back to argmax semantics.
    dead = array("d", [0.0, 0.0])
    assert impl.select_index(dead, 0.9, 0.5, -1) == 0
    assert impl.select_index_masked(dead, 0.9, 0.5, b"\x01\x01") == 0

    # An explore draw at the extreme still returns a valid index.
    col2 = array("d", [0.5, 0.5])
    assert impl.select_index(col2, 0.999999999, 0.0, -1) in (0, 1)


@pytest.mark.parametrize("impl", [pure, compiled])
def test_normalize_underflow_resets_uniform(impl):
    col = array("d", [0.0, 0.0, 0.0, 0.0])
    impl.normalize(col)
    assert list(col) == [0.25, 0.25, 0.25, 0.25]
    impl.normalize(array("d"))  # empty column is a no-op


def test_env_flag_forces_pure_fallback():
    code = "from antmesh_sim import kernels; print(kernels.COMPILED)"
    env = dict(os.environ, ANTMESH_PURE_PY="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "False"


def test_default_prefers_compiled_when_built():
    assert kernels.COMPILED is True
    assert kernels.select_index is compiled.select_index
