"""Benchmark the compiled render kernel against the numpy fallback.

Renders the same seeded random frames through both backends, reports the
best-of-N per-frame time and the speedup, and cross-checks that the two
outputs are bit-identical (they share one floating-point contract; a
mismatch here means the build or a platform broke it).
"""

from __future__ import annotations

import time

import numpy as np

from gaitmap import _render_np


def _load_compiled():
    try:
        from gaitmap import _render_cy

        return _render_cy
    except ImportError:
        return None


def _random_frames(n: int, canvas: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    frames = []
    for _ in range(n):
        pts = np.column_stack(
            [
                rng.uniform(0.2 * canvas, 0.8 * canvas, 17),
                rng.uniform(0.2 * canvas, 0.8 * canvas, 17),
                rng.uniform(0.1, 1.0, 17),
            ]
        )
        frames.append(np.ascontiguousarray(pts))
    limbs = np.ascontiguousarray(
        np.array(
            [(a, b) for a, b in zip(rng.integers(0, 17, 19), rng.integers(0, 17, 19)) if a != b]
            or [(0, 1)],
            dtype=np.intc,
        )
    )
    return frames, limbs


def _time_backend(kernel, frames, limbs, canvas, sigma, radius, repeat):
    best = float("inf")
    outputs = []
    for _ in range(repeat):
        outputs = []
        t0 = time.perf_counter()
        for pts in frames:
            j = kernel.render_joint_channel(pts, canvas, sigma, radius)
            l = kernel.render_limb_channel(pts, limbs, canvas, sigma, radius)
            outputs.append((j, l))
        best = min(best, time.perf_counter() - t0)
    return best, outputs


def run_benchmark(
    frames: int = 30, sigma: float = 8.0, canvas: int = 128, repeat: int = 3
) -> dict:
    """Print a comparison table; returns the raw numbers."""
    pts_list, limbs = _random_frames(frames, canvas)
    radius = 6.0
    results: dict = {"frames": frames, "sigma": sigma, "canvas": canvas}

    t_np, out_np = _time_backend(
        _render_np, pts_list, limbs, canvas, sigma, radius, repeat
    )
    results["numpy_ms_per_frame"] = 1000.0 * t_np / frames
    print(f"numpy fallback : {results['numpy_ms_per_frame']:8.3f} ms/frame")

    compiled = _load_compiled()
    if compiled is None:
        print("compiled kernel: not built (pip install -e . compiles it)")
        return results

    t_cy, out_cy = _time_backend(compiled, pts_list, limbs, canvas, sigma, radius, repeat)
    results["cython_ms_per_frame"] = 1000.0 * t_cy / frames
    results["speedup"] = t_np / t_cy
    identical = all(
        np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        for a, b in zip(out_np, out_cy)
    )
    results["bit_identical"] = identical
    print(f"compiled kernel: {results['cython_ms_per_frame']:8.3f} ms/frame")
    print(f"speedup        : {results['speedup']:8.2f}x")
    print(f"bit-identical  : {identical}")
    if not identical:
        raise AssertionError("backends disagree; floating-point contract violated")
    return results
