import random
import subprocess
import sys

import pytest

from conceptprobe.kernels import _closure_py, available_implementations

from .oracles import random_context


def test_fallback_always_available():
    impls = available_implementations()
    assert "python" in impls


def test_implementations_agree_on_random_contexts():
    impls = available_implementations()
    if len(impls) < 2:
        pytest.skip("compiled kernel not built")
    rng = random.Random(555)
    for _ in range(60):
        ctx = random_context(rng, max_objects=12, max_attributes=12, density=0.5)
        results = {
            name: fn(ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, 1 << 20)
            for name, fn in impls.items()
        }
        first = next(iter(results.values()))
        for name, got in results.items():
            assert got == first, name


def test_implementations_agree_on_wide_contexts():
    # More than 64 objects and attributes exercises the multi-word paths.
    impls = available_implementations()
    if len(impls) < 2:
        pytest.skip("compiled kernel not built")
    rng = random.Random(77)
    from conceptprobe import FormalContext

    rows = []
    n_obj, n_attr = 70, 130
    for _ in range(n_obj):
        row = 0
        for m in range(n_attr):
            if rng.random() < 0.05:
                row |= 1 << m
        rows.append(row)
    ctx = FormalContext(
        "wide",
        [f"g{i}" for i in range(n_obj)],
        [f"m{j}" for j in range(n_attr)],
        rows,
    )
    results = {
        name: fn(ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, 1 << 20)
        for name, fn in available_implementations().items()
    }
    first = next(iter(results.values()))
    assert all(got == first for got in results.values())
    assert len(first) > n_obj  # sanity: non-trivial lattice


def test_limit_returns_none():
    rng = random.Random(1)
    ctx = random_context(rng, max_objects=8, max_attributes=8)
    full = _closure_py.enumerate_closed_extents(
        ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, 1 << 20
    )
    if len(full) > 1:
        for name, fn in available_implementations().items():
            assert fn(ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, len(full) - 1) is None, name


def test_pure_env_var_forces_fallback():
    code = (
        "import conceptprobe.kernels as k; "
        "print(k.ACTIVE_IMPL)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"CONCEPTPROBE_PURE": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
