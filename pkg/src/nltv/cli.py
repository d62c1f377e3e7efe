"""Batch command line: noise, denoise, sure-select, eval, bench.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure.
Every command that writes files also writes a JSON manifest (one line)
recording the argv, resolved parameters, input checksums and runtime, so
a run can be reproduced exactly. NLTV_THREADS caps the number of worker
processes the bench suite may use; everything else is single-threaded
and deterministic.
"""

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import os
import sys
import time
import zlib

import numpy as np

from . import __version__, io, presets
from .backend import backend_name
from .baselines import nl_means
from .local import LocalParams, denoise_tiled
from .presets import PresetError
from .raster import NoiseSpec, add_gaussian_noise, mse, psnr
from .spectral import dft2
from .sure import assemble_selection, random_selection_psnr, region_selection
from .variational import SolverConfig, StepSearchError, descend
from .weights import PatchGeometry, similarity_weights, tv_weights

METHODS = ("rof", "nlmeans", "nltv", "fnltv", "sfnltv", "l-sfnltv", "l-fnltv")

CSV_FIELDS = (
    "image",
    "method",
    "sigma",
    "seed",
    "psnr_db",
    "mse",
    "runtime_s",
    "paper_psnr_db",
    "delta_db",
)


class UsageError(ValueError):
    pass


class CliIOError(RuntimeError):
    pass


class NumericalError(RuntimeError):
    pass


def _read(path, reader):
    try:
        return reader(path)
    except FileNotFoundError:
        raise CliIOError(f"{path}: no such file") from None
    except (OSError, ValueError) as exc:
        raise CliIOError(f"{path}: {exc}") from exc


def _check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NumericalError(f"{what} produced non-finite values")


def _sidecar_path(output, explicit):
    if explicit:
        return explicit
    stem, _, _ = str(output).rpartition(".")
    return (stem or str(output)) + io.FLOAT_SUFFIX


def _write_manifest(path, command, argv, params, inputs, outputs, started, extra=None):
    record = {
        "command": command,
        "argv": list(argv),
        "params": params,
        "inputs": {str(p): io.sha256_of(p) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "duration_s": round(time.monotonic() - started, 3),
        "version": __version__,
        "backend": backend_name(),
    }
    if extra:
        record.update(extra)
    line = json.dumps(record, sort_keys=True)
    if path is None:
        print(line)
    else:
        with open(path, "w") as fh:
            fh.write(line + "\n")
    return record


# ---------------------------------------------------------------------------
# parameter resolution

def _geometry(args, kind, defaults):
    """Spatial ('' prefix) or frequency ('f' suffix) patch geometry."""
    if kind == "spatial":
        d, win, sr = args.d, args.window, args.sigma_r
    else:
        d, win, sr = args.d_f, args.window_f, args.sigma_rf
    d = defaults[0] if d is None else d
    win = defaults[1] if win is None else win
    sr = defaults[2] if sr is None else sr
    if d is None or win is None or sr is None:
        raise UsageError(
            f"{kind} geometry incomplete: need patch side, window side and sigma_r "
            "(from --sigma preset or explicit flags)"
        )
    return PatchGeometry(d=int(d), D=int(win), sigma_r=float(sr))


def _preset_or_none(fetch, *a, **kw):
    try:
        return fetch(*a, **kw)
    except PresetError:
        return None


def resolve_run(args):
    """Merge sigma-indexed presets with explicit flags into one run plan."""
    method = args.method
    sigma = args.sigma
    iters = args.iters
    beta = args.beta if args.beta is not None else 1e-2
    t_init = args.t_init if args.t_init is not None else 0.2

    def cfg(lam=0.0, lam_f=0.0, default_iters=50):
        return SolverConfig(
            lam=lam,
            lam_f=lam_f,
            beta=beta,
            t_init=t_init,
            n_iter=int(iters) if iters is not None else default_iters,
        )

    if method == "rof":
        base = _preset_or_none(presets.rof_preset, sigma) if sigma is not None else None
        lam = args.lam if args.lam is not None else (base.lam if base else None)
        if lam is None:
            raise UsageError("rof needs --lam (or --sigma 20 for the preset)")
        return {"kind": "global", "spatial": "tv", "frequency": None, "cfg": cfg(lam=float(lam))}

    if method == "nlmeans":
        base = _preset_or_none(presets.nlmeans_preset, sigma) if sigma is not None else None
        dflt = (base.d, base.D, base.sigma_r) if base else (None, None, None)
        return {"kind": "nlmeans", "geom": _geometry(args, "spatial", dflt)}

    if method in ("nltv", "fnltv", "sfnltv"):
        if method == "nltv":
            base = _preset_or_none(presets.nltv_preset, sigma) if sigma is not None else None
        elif method == "fnltv":
            base = _preset_or_none(presets.fnltv_preset, sigma) if sigma is not None else None
        else:
            base = _preset_or_none(presets.sfnltv_preset, sigma) if sigma is not None else None
        sp = base.spatial if base else None
        fq = base.frequency if base else None
        spatial = frequency = None
        lam = lam_f = 0.0
        if method in ("nltv", "sfnltv"):
            dflt = (sp.d, sp.D, sp.sigma_r) if sp else (None, None, None)
            spatial = _geometry(args, "spatial", dflt)
            lam = args.lam if args.lam is not None else (base.cfg.lam if base else None)
            if lam is None:
                raise UsageError(f"{method} needs --lam (or a sigma-indexed preset)")
        if method in ("fnltv", "sfnltv"):
            dflt = (fq.d, fq.D, fq.sigma_r) if fq else (None, None, None)
            frequency = _geometry(args, "frequency", dflt)
            lam_f = args.lam_f if args.lam_f is not None else (base.cfg.lam_f if base else None)
            if lam_f is None:
                raise UsageError(f"{method} needs --lam-f (or a sigma-indexed preset)")
        default_iters = base.cfg.n_iter if base else 50
        return {
            "kind": "global",
            "spatial": spatial,
            "frequency": frequency,
            "cfg": cfg(lam=float(lam or 0.0), lam_f=float(lam_f or 0.0), default_iters=default_iters),
        }

    # localized methods
    if method == "l-sfnltv":
        base = None
        if sigma is not None:
            base = _preset_or_none(presets.l_sfnltv_preset, sigma, textured=args.preset == "textured")
    else:
        base = _preset_or_none(presets.l_fnltv_preset, sigma) if sigma is not None else None
    size = args.region if args.region is not None else (base.size if base else 16)
    step = args.step if args.step is not None else (base.step if base else 6)
    lam = lam_f = 0.0
    spatial = frequency = None
    if method == "l-sfnltv":
        sp = base.spatial if base else None
        spatial = _geometry(args, "spatial", (sp.d, sp.D, sp.sigma_r) if sp else (None, None, None))
        lam = args.lam if args.lam is not None else (base.lam if base else None)
        if lam is None:
            raise UsageError("l-sfnltv needs --lam (or a sigma-indexed preset)")
    fq = base.frequency if base else None
    frequency = _geometry(args, "frequency", (fq.d, fq.D, fq.sigma_r) if fq else (None, None, None))
    lam_f = args.lam_f if args.lam_f is not None else (base.lam_f if base else None)
    if lam_f is None:
        raise UsageError(f"{method} needs --lam-f (or a sigma-indexed preset)")
    params = LocalParams(
        size=int(size),
        step=int(step),
        spatial=spatial,
        frequency=frequency,
        lam=float(lam or 0.0),
        lam_f=float(lam_f),
        n_iter=int(iters) if iters is not None else (base.n_iter if base else 20),
        beta=beta,
        t_init=t_init,
        trim=True,
    )
    return {"kind": "local", "params": params}


def _params_dict(plan):
    def enc(obj):
        if dataclasses.is_dataclass(obj):
            return {k: enc(v) for k, v in dataclasses.asdict(obj).items()}
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return obj

    out = {}
    for key, val in plan.items():
        out[key] = enc(val) if not isinstance(val, str) else val
    return out


def execute_plan(plan, noisy, trace_rows=None, reference=None):
    """Run a resolved plan on a noisy raster; returns the estimate."""
    if plan["kind"] == "nlmeans":
        return nl_means(noisy, plan["geom"])
    if plan["kind"] == "local":
        return denoise_tiled(noisy, plan["params"])
    cfg = plan["cfg"]
    if plan["spatial"] == "tv":
        spatial = tv_weights(*noisy.shape)
    elif plan["spatial"] is not None:
        spatial = similarity_weights(noisy, plan["spatial"])
    else:
        spatial = None
    frequency = (
        similarity_weights(dft2(noisy), plan["frequency"])
        if plan["frequency"] is not None
        else None
    )
    psnrs = []
    callback = None
    if trace_rows is not None and reference is not None:
        callback = lambda k, u, g, t: psnrs.append(psnr(reference, u - t * g))  # noqa: E731
    trace = descend(noisy, cfg, spatial=spatial, frequency=frequency, step_callback=callback)
    if trace_rows is not None:
        for k, energy in enumerate(trace.energies):
            row = {"iteration": k, "energy": energy, "step": trace.steps[k - 1] if k else ""}
            if reference is not None:
                row["psnr_db"] = psnr(reference, noisy) if k == 0 else psnrs[k - 1]
            trace_rows.append(row)
    return trace.u


# ---------------------------------------------------------------------------
# commands

def cmd_noise(args):
    started = time.monotonic()
    clean = _read(args.input, io.read_field)
    spec = NoiseSpec(sigma=args.sigma, seed=args.seed)
    noisy = add_gaussian_noise(clean, spec)
    _check_finite(noisy, "noise synthesis")
    sidecar = _sidecar_path(args.output, args.float_sidecar)
    io.write_image(args.output, noisy)
    io.write_floats(sidecar, noisy)
    _write_manifest(
        str(args.output) + ".manifest.json",
        "noise",
        args.argv,
        {"sigma": args.sigma, "seed": args.seed, "prng_id": spec.prng_id},
        [args.input],
        [args.output, sidecar],
        started,
    )
    print(f"wrote {args.output} (+{sidecar}), sigma={args.sigma} seed={args.seed}")
    return 0


def cmd_denoise(args):
    started = time.monotonic()
    plan = resolve_run(args)
    noisy = _read(args.input, io.read_field)
    reference = _read(args.ref, io.read_field) if args.ref else None
    trace_rows = [] if args.trace else None
    out = execute_plan(plan, noisy, trace_rows=trace_rows, reference=reference)
    _check_finite(out, f"{args.method}")
    sidecar = _sidecar_path(args.output, args.float_sidecar)
    io.write_image(args.output, out)
    io.write_floats(sidecar, out)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=("iteration", "energy", "step", "psnr_db"))
            writer.writeheader()
            for row in trace_rows:
                writer.writerow(row)
    inputs = [args.input] + ([args.ref] if args.ref else [])
    _write_manifest(
        str(args.output) + ".manifest.json",
        "denoise",
        args.argv,
        {"method": args.method, **_params_dict(plan)},
        inputs,
        [args.output, sidecar] + ([args.trace] if args.trace else []),
        started,
    )
    msg = f"{args.method}: wrote {args.output}"
    if reference is not None:
        msg += f", psnr={psnr(reference, out):.4f} dB"
    print(msg)
    return 0


def cmd_sure_select(args):
    started = time.monotonic()
    noisy = _read(args.input, io.read_field)
    candidates = [float(tok) for tok in args.lambdas.split(",") if tok.strip()]
    if not candidates:
        raise UsageError("--lambdas must name at least one candidate")
    geom = PatchGeometry(d=args.d or 9, D=args.window or 3, sigma_r=args.sigma_r or 20.0)
    cfg = SolverConfig(
        lam=candidates[0],
        beta=args.beta if args.beta is not None else 1e-2,
        t_init=args.t_init if args.t_init is not None else 0.2,
        n_iter=args.iters or presets.SURE_DEFAULT_ITERS,
    )
    selection = region_selection(noisy, args.sigma, candidates, args.region, geom, cfg)
    out = assemble_selection(selection)
    _check_finite(out, "sure-select")
    sidecar = _sidecar_path(args.output, args.float_sidecar)
    io.write_image(args.output, out)
    io.write_floats(sidecar, out)
    outputs = [args.output, sidecar]
    if args.map:
        # One row per (region, candidate, iterate): enough to redraw the
        # estimated-risk-vs-iteration curve of every candidate.
        lam_map = selection.chosen_lambdas()
        with open(args.map, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["origin_y", "origin_x", "lambda", "iteration", "sure", "chosen"])
            for a, oy in enumerate(selection.origins_y):
                for b, ox in enumerate(selection.origins_x):
                    for c, lam in enumerate(selection.candidates):
                        for k, val in enumerate(selection.sure_traces[a][b][c]):
                            writer.writerow([oy, ox, lam, k, val, lam_map[a, b]])
        outputs.append(args.map)
    chosen = selection.chosen_lambdas()
    counts = {lam: int(np.sum(chosen == lam)) for lam in candidates}
    print(f"selected per region: {counts}")
    if args.ref:
        reference = _read(args.ref, io.read_field)
        print(f"psnr={psnr(reference, out):.4f} dB")
    _write_manifest(
        str(args.output) + ".manifest.json",
        "sure-select",
        args.argv,
        {
            "sigma": args.sigma,
            "lambdas": candidates,
            "region": args.region,
            "geom": {"d": geom.d, "D": geom.D, "sigma_r": geom.sigma_r},
            "iters": cfg.n_iter,
        },
        [args.input],
        outputs,
        started,
    )
    return 0


def cmd_eval(args):
    started = time.monotonic()
    reference = _read(args.ref, io.read_field)
    test = _read(args.test, io.read_field)
    err = mse(reference, test)
    ratio = psnr(reference, test)
    print(f"mse={err:.6f}")
    print(f"psnr={'inf' if ratio == float('inf') else f'{ratio:.4f}'} dB")
    _write_manifest(
        None,
        "eval",
        args.argv,
        {"mse": err, "psnr_db": None if ratio == float("inf") else ratio},
        [args.ref, args.test],
        [],
        started,
    )
    return 0


# ---------------------------------------------------------------------------
# bench

def _corpus_paths(directory):
    found, missing = {}, []
    for name in presets.CORPUS:
        for ext in (".png", ".pgm"):
            path = os.path.join(directory, name + ext)
            if os.path.exists(path):
                found[name] = path
                break
        else:
            missing.append(f"{name}.png|{name}.pgm")
    return found, missing


def _cell_seed(base, image, sigma, rep):
    return (base + zlib.crc32(f"{image}:{sigma}:{rep}".encode())) % (1 << 31)


def run_preset_method(noisy, method, sigma, image):
    """Preset-exact method run used by the bench suites."""
    if method == "rof":
        cfg = presets.rof_preset(sigma, image)
        return descend(noisy, cfg, spatial=tv_weights(*noisy.shape)).u
    if method == "nlmeans":
        return nl_means(noisy, presets.nlmeans_preset(sigma, image))
    if method == "nltv":
        preset = presets.nltv_preset(sigma, image)
        field = similarity_weights(noisy, preset.spatial)
        return descend(noisy, preset.cfg, spatial=field).u
    if method == "sfnltv":
        preset = presets.sfnltv_preset(sigma, image)
        spatial = similarity_weights(noisy, preset.spatial)
        frequency = similarity_weights(dft2(noisy), preset.frequency)
        return descend(noisy, preset.cfg, spatial=spatial, frequency=frequency).u
    if method == "l-sfnltv":
        params = presets.l_sfnltv_preset(sigma, textured=image == "barbara")
        return denoise_tiled(noisy, params)
    if method == "l-fnltv":
        return denoise_tiled(noisy, presets.l_fnltv_preset(sigma))
    raise UsageError(f"bench cannot run method {method!r}")


def _bench_cell(cell):
    """One computed CSV row; top level so process pools can pickle it."""
    image, path, method, sigma, seed = cell
    clean = io.read_field(path)
    noisy = add_gaussian_noise(clean, NoiseSpec(sigma=sigma, seed=seed))
    t0 = time.monotonic()
    if method.startswith(("sure", "random")):
        size = int(method[-2:])
        geom = presets.sure_geometry()
        cfg = SolverConfig(lam=1.0, n_iter=presets.SURE_DEFAULT_ITERS)
        selection = region_selection(
            noisy, sigma, list(presets.SURE_DEFAULT_CANDIDATES), size, geom, cfg
        )
        if method.startswith("sure"):
            estimate = assemble_selection(selection)
            value = psnr(clean, estimate)
            err = mse(clean, estimate)
        else:
            value, _ = random_selection_psnr(selection, clean, n_draws=20, seed=seed)
            err = float("nan")
        elapsed = time.monotonic() - t0
        return image, method, sigma, seed, value, err, elapsed
    estimate = run_preset_method(noisy, method, sigma, image)
    elapsed = time.monotonic() - t0
    return image, method, sigma, seed, psnr(clean, estimate), mse(clean, estimate), elapsed


def _suite_cells(suite, paths, seeds, base_seed):
    cells = []
    external = []
    if suite == "table2":
        for image, path in paths.items():
            for method in ("nltv", "nlmeans", "rof", "sfnltv"):
                for rep in range(seeds):
                    cells.append(
                        (image, path, method, 20.0, _cell_seed(base_seed, image, 20.0, rep))
                    )
    elif suite == "table4":
        for sigma in (10.0, 20.0, 30.0, 50.0):
            for image, path in paths.items():
                for method in ("sfnltv", "l-sfnltv"):
                    for rep in range(seeds):
                        cells.append(
                            (image, path, method, sigma, _cell_seed(base_seed, image, sigma, rep))
                        )
                for method in presets.EXTERNAL_METHODS:
                    external.append((image, method, sigma))
    elif suite == "table1":
        for image, path in paths.items():
            for method in ("sure16", "random16", "sure32", "random32"):
                for rep in range(seeds):
                    cells.append(
                        (image, path, method, 20.0, _cell_seed(base_seed, image, 20.0, rep))
                    )
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return cells, external


def _paper_value(suite, image, method, sigma):
    if suite == "table2":
        return presets.TABLE_GLOBAL_SIGMA20[method][image]
    if suite == "table4":
        return presets.TABLE_BY_SIGMA[int(sigma)][method][image]
    size = int(method[-2:])
    kind = "sure" if method.startswith("sure") else "random"
    return presets.TABLE_SELECTION[size][kind][image]


def cmd_bench(args):
    started = time.monotonic()
    paths, missing = _corpus_paths(args.images)
    if missing:
        raise CliIOError(
            f"corpus incomplete under {args.images}: missing " + ", ".join(missing)
        )
    cells, external = _suite_cells(args.suite, paths, args.seeds, args.seed)
    threads = int(os.environ.get("NLTV_THREADS", "1"))
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_bench_cell, cells))
    else:
        results = [_bench_cell(cell) for cell in cells]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for image, method, sigma, seed, value, err, elapsed in results:
            paper = _paper_value(args.suite, image, method, sigma)
            writer.writerow(
                [
                    image,
                    method,
                    sigma,
                    seed,
                    f"{value:.4f}",
                    "" if np.isnan(err) else f"{err:.6f}",
                    f"{elapsed:.3f}",
                    f"{paper:.2f}",
                    f"{value - paper:+.4f}",
                ]
            )
        for image, method, sigma in external:
            paper = _paper_value(args.suite, image, method, sigma)
            writer.writerow([image, method, sigma, "", "", "", "", f"{paper:.2f}", "external"])
    _write_manifest(
        str(args.out) + ".manifest.json",
        "bench",
        args.argv,
        {"suite": args.suite, "seeds": args.seeds, "base_seed": args.seed, "threads": threads},
        list(paths.values()),
        [args.out],
        started,
    )
    print(f"wrote {args.out}: {len(cells)} computed rows, {len(external)} external rows")
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_geometry_flags(p):
    p.add_argument("--lam", type=float, help="spatial regularizer strength")
    p.add_argument("--lam-f", dest="lam_f", type=float, help="frequency regularizer strength")
    p.add_argument("--d", type=int, help="spatial patch side (odd)")
    p.add_argument("--D", dest="window", type=int, help="spatial search window side (odd)")
    p.add_argument("--sigma-r", dest="sigma_r", type=float, help="spatial similarity scale")
    p.add_argument("--d-f", dest="d_f", type=int, help="frequency patch side (odd)")
    p.add_argument("--D-f", dest="window_f", type=int, help="frequency window side (odd)")
    p.add_argument("--sigma-rf", dest="sigma_rf", type=float, help="frequency similarity scale")
    p.add_argument("--iters", type=int, help="descent iterations")
    p.add_argument("--beta", type=float, help="magnitude smoothing (default 1e-2)")
    p.add_argument("--t-init", dest="t_init", type=float, help="initial step size (default 0.2)")


def _parser():
    parser = argparse.ArgumentParser(
        prog="nltv",
        description="Nonlocal total-variation denoising in the pixel and frequency domains.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("noise", help="add reproducible Gaussian noise")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--float-sidecar", dest="float_sidecar")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", help="run one denoising method")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--sigma", type=float, help="noise level selecting sigma-indexed presets")
    p.add_argument(
        "--preset",
        choices=("natural", "textured"),
        default="natural",
        help="l-sfnltv preset family",
    )
    p.add_argument("--region", type=int, help="local region side")
    p.add_argument("--step", type=int, help="local region stride")
    _add_geometry_flags(p)
    p.add_argument("--ref", help="clean reference, reports PSNR")
    p.add_argument("--trace", help="write per-iteration CSV here")
    p.add_argument("--float-sidecar", dest="float_sidecar")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sure-select", help="per-region risk-driven lambda selection")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--lambdas", default=",".join(str(c) for c in presets.SURE_DEFAULT_CANDIDATES))
    p.add_argument("--region", type=int, default=16)
    p.add_argument("--d", type=int)
    p.add_argument("--D", dest="window", type=int)
    p.add_argument("--sigma-r", dest="sigma_r", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--t-init", dest="t_init", type=float)
    p.add_argument("--map", help="write per-region lambda CSV here")
    p.add_argument("--ref")
    p.add_argument("--float-sidecar", dest="float_sidecar")
    p.set_defaults(func=cmd_sure_select)

    p = sub.add_parser("eval", help="MSE / PSNR between two fields")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="reproduce a published comparison")
    p.add_argument("--suite", required=True, choices=("table1", "table2", "table4"))
    p.add_argument("--images", required=True, help="directory with the standard test images")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--seeds", type=int, default=1, help="noise realizations per cell")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    args.argv = argv
    try:
        return args.func(args) or 0
    except (UsageError, PresetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CliIOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except StepSearchError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
