"""Timing comparison between the compiled kernels and the numpy fallback.

Runs each hot kernel on both backends and prints a table of per-call
times and speedups, plus an end-to-end region descent. Sizes default to
a realistic denoising workload; shrink them with --size/--repeats for a
quick look.

Usage:
    python benchmarks/bench_backends.py [--size 256] [--repeats 3]
"""

import argparse
import sys
import time

import numpy as np

from nltv import _kernels_np as np_kernels
from nltv.spectral import dft2
from nltv.variational import SolverConfig, descend
from nltv.weights import PatchGeometry, patch_offsets, similarity_weights, window_offsets

try:
    from nltv import _kernels as cy_kernels
except ImportError:
    cy_kernels = None


def timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def kernel_cases(size, rng):
    v = rng.uniform(0, 255, (size, size))
    spec = dft2(v)
    sgeom = PatchGeometry(d=9, D=3, sigma_r=20.0)
    fgeom = PatchGeometry(d=9, D=5, sigma_r=16.0)
    s_offs = window_offsets(sgeom.D)
    f_offs = window_offsets(fgeom.D)
    s_poffs, s_kernel = patch_offsets(sgeom)
    f_poffs, f_kernel = patch_offsets(fgeom)
    inv_s = 1.0 / (2.0 * sgeom.sigma_r**2)
    inv_f = 1.0 / (2.0 * fgeom.sigma_r**2)

    def cases_for(k):
        planes_s = k.weight_planes(v, s_offs, s_poffs, s_kernel, inv_s)
        planes_f = k.weight_planes(spec, f_offs, f_poffs, f_kernel, inv_f)
        mags_s = k.magnitude_field(v, planes_s, s_offs, 1e-2)
        mags_f = k.magnitude_field(spec, planes_f, f_offs, 1e-2)
        return [
            ("weights spatial d=9 D=3", lambda: k.weight_planes(v, s_offs, s_poffs, s_kernel, inv_s)),
            ("weights frequency d=9 D=5", lambda: k.weight_planes(spec, f_offs, f_poffs, f_kernel, inv_f)),
            ("magnitudes spatial", lambda: k.magnitude_field(v, planes_s, s_offs, 1e-2)),
            ("magnitudes frequency", lambda: k.magnitude_field(spec, planes_f, f_offs, 1e-2)),
            ("gradient spatial", lambda: k.reg_gradient(v, planes_s, mags_s, s_offs)),
            ("gradient frequency", lambda: k.reg_gradient(spec, planes_f, mags_f, f_offs)),
            ("nl-means filter", lambda: k.nl_means_kernel(v, planes_s, s_offs)),
        ]

    return cases_for


def jacobian_case(rng):
    region = rng.uniform(0, 255, (16, 16))
    geom = PatchGeometry(d=9, D=3, sigma_r=20.0)
    field = similarity_weights(region, geom)
    offs = field.offsets
    p = region.size
    wflat = field.planes.reshape(offs.shape[0], p)
    jmat = np.eye(p)

    def run(k):
        poffs, kernel = patch_offsets(geom)
        dw = k.weight_grad_planes(region, field.planes, offs, poffs, kernel, geom.sigma_r)
        mags = k.magnitude_field(region, field.planes, offs, 1e-2)
        nb = k.neighbor_maps(region.shape, offs)
        return k.jac_reg_step(region.ravel(), mags.ravel(), wflat, nb, jmat.copy(), dw)

    return run


def descent_case(size, rng):
    v = rng.uniform(0, 255, (size, size))
    geom = PatchGeometry(d=9, D=3, sigma_r=20.0)
    cfg = SolverConfig(lam=15.0, n_iter=10)

    def run():
        field = similarity_weights(v, geom)
        return descend(v, cfg, spatial=field).u

    return run


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=256, help="kernel benchmark image side")
    parser.add_argument("--descent-size", type=int, default=64, help="end-to-end descent side")
    parser.add_argument("--repeats", type=int, default=3, help="best-of-N timing")
    args = parser.parse_args(argv)

    if cy_kernels is None:
        print("compiled backend unavailable; timing numpy fallback only", file=sys.stderr)

    rng = np.random.default_rng(0)
    cases_for = kernel_cases(args.size, rng)
    rows = []

    np_cases = cases_for(np_kernels)
    cy_cases = cases_for(cy_kernels) if cy_kernels else None
    for idx, (label, np_fn) in enumerate(np_cases):
        t_np, _ = timed(np_fn, args.repeats)
        if cy_cases:
            t_cy, _ = timed(cy_cases[idx][1], args.repeats)
            rows.append((label, t_np, t_cy))
        else:
            rows.append((label, t_np, None))

    jac = jacobian_case(rng)
    t_np, _ = timed(lambda: jac(np_kernels), args.repeats)
    t_cy = timed(lambda: jac(cy_kernels), args.repeats)[0] if cy_kernels else None
    rows.append(("risk jacobian step 16x16", t_np, t_cy))

    import nltv.backend as backend

    run = descent_case(args.descent_size, rng)
    backend.kernels = np_kernels
    t_np, _ = timed(run, max(1, args.repeats - 1))
    t_cy = None
    if cy_kernels:
        backend.kernels = cy_kernels
        t_cy, _ = timed(run, max(1, args.repeats - 1))
    rows.append((f"descent 10 iters {args.descent_size}x{args.descent_size}", t_np, t_cy))

    width = max(len(r[0]) for r in rows)
    print(f"image {args.size}x{args.size}, best of {args.repeats}")
    header = f"{'case':<{width}}  {'numpy':>10}  {'cython':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, t_np, t_cy in rows:
        if t_cy is None:
            print(f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {'n/a':>10}  {'n/a':>8}")
        else:
            print(
                f"{label:<{width}}  {t_np * 1e3:>8.2f}ms  {t_cy * 1e3:>8.2f}ms"
                f"  {t_np / t_cy:>7.1f}x"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
