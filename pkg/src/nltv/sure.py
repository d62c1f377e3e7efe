"""Unbiased risk estimation for the spatial nonlocal solver.

For the descent map v -> u^k(v) the risk estimate at iterate k is

    SURE_k = ||u^k - v||^2 / P  -  sigma^2  +  2 sigma^2 tr(J^k) / P

with J^k = du^k/dv propagated exactly through the implemented update:

    J^0 = I,   J^{k+1} = J^k - t_k * G^k,
    G^k = lam * d(reg_gradient)/dv + J^k - I.

The weight field enters twice: through the iterate (via J) and directly,
because the weights are functions of v. Accepted step sizes t_k are
treated as constants of v. The dense weight derivative dw depends on v
only, so one (K, P, P) tensor is shared by every candidate lam. Dense
Jacobians cap the region size at 32 x 32.
"""

import dataclasses

import numpy as np

from . import backend
from .local import tile
from .raster import as_raster, psnr, reflect_index
from .variational import SolverConfig, descend, nonlocal_magnitude
from .weights import PatchGeometry, WeightField, patch_offsets, similarity_weights

MAX_REGION_PIXELS = 32 * 32


@dataclasses.dataclass
class SureReport:
    lam: float
    sure: list  # per iterate 0..K
    divergence: list  # tr(J^k), per iterate
    residual_msq: list  # ||u^k - v||^2 / P, per iterate
    steps: list
    u: np.ndarray  # final iterate


def sure_value(residual_sq_sum, n, sigma, divergence):
    """The estimate itself; exact sigma^2 at the identity map (u = v)."""
    return residual_sq_sum / n - sigma * sigma + 2.0 * sigma * sigma * (divergence / n)


def weight_derivative(v, geom, i, j, l):
    """d w(i, j) / d v(l), single entry, direct summation.

    Reference twin of the dense kernel: differentiates the patch distance
    through every (possibly reflected) sample position.
    """
    v = as_raster(v, "v")
    m, n = v.shape
    offs, kernel = patch_offsets(geom)
    norm = float(kernel.sum())
    dist = 0.0
    ddist = 0.0
    for (py, px), a in zip(offs, kernel):
        ki = (reflect_index(i[0] + py, m), reflect_index(i[1] + px, n))
        kj = (reflect_index(j[0] + py, m), reflect_index(j[1] + px, n))
        diff = v[ki] - v[kj]
        dist += a * diff * diff
        indicator = (1.0 if ki == tuple(l) else 0.0) - (1.0 if kj == tuple(l) else 0.0)
        ddist += a * diff * indicator
    dist /= norm
    weight = np.exp(-dist / (2.0 * geom.sigma_r**2))
    return float(weight * ddist / (-(geom.sigma_r**2) * norm))


def weight_grad_field(v, field):
    """Dense (K, P, P) derivative of a similarity field w.r.t. its input."""
    if field.geom is None:
        raise ValueError("weight field carries no patch geometry")
    v = as_raster(v, "v")
    if v.size > MAX_REGION_PIXELS:
        raise ValueError(
            f"dense weight derivatives need <= {MAX_REGION_PIXELS} pixels, got {v.size}"
        )
    offs, kernel = patch_offsets(field.geom)
    return backend.kernels.weight_grad_planes(
        v, field.planes, field.offsets, offs, kernel, field.geom.sigma_r
    )


def gradient_jacobian(u, v, field, jmat, lam, beta, dw=None):
    """d/dv of the energy gradient at u, given jmat = du/dv."""
    u = np.asarray(u, dtype=np.float64)
    p_count = u.size
    ident = np.eye(p_count)
    if lam == 0.0:
        return jmat - ident
    if dw is None:
        dw = weight_grad_field(v, field)
    mags = nonlocal_magnitude(u, field, beta)
    nbmaps = backend.kernels.neighbor_maps(u.shape, field.offsets)
    wflat = field.planes.reshape(field.offsets.shape[0], p_count)
    greg = backend.kernels.jac_reg_step(
        u.ravel(), mags.ravel(), wflat, nbmaps, jmat, dw
    )
    return lam * greg + jmat - ident


def _trace_with_field(v, sigma, field, dw, cfg):
    p_count = v.size
    nbmaps = backend.kernels.neighbor_maps(v.shape, field.offsets)
    wflat = field.planes.reshape(field.offsets.shape[0], p_count)
    jmat = np.eye(p_count)
    ident = np.eye(p_count)
    divergence = [float(np.trace(jmat))]

    def propagate(k, u_before, grad, t):
        mags = nonlocal_magnitude(u_before, field, cfg.beta)
        gmat = backend.kernels.jac_reg_step(
            u_before.ravel(), mags.ravel(), wflat, nbmaps, jmat, dw
        )
        gmat *= cfg.lam
        gmat += jmat
        gmat -= ident
        jmat[...] -= t * gmat
        divergence.append(float(np.trace(jmat)))

    trace = descend(v, cfg, spatial=field, keep_iterates=True, step_callback=propagate)
    residual_msq = [float(np.sum((uk - v) ** 2)) / p_count for uk in trace.iterates]
    sure = [
        sure_value(r * p_count, p_count, sigma, d)
        for r, d in zip(residual_msq, divergence)
    ]
    return SureReport(cfg.lam, sure, divergence, residual_msq, trace.steps, trace.u)


def sure_trace(v, sigma, geom, cfg):
    """Risk estimates along the descent for a single lam (= cfg.lam)."""
    v = as_raster(v, "noisy input")
    if v.size > MAX_REGION_PIXELS:
        raise ValueError(
            f"sure_trace propagates a dense {v.size}^2 Jacobian; "
            f"region must have <= {MAX_REGION_PIXELS} pixels"
        )
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    field = similarity_weights(v, geom)
    dw = weight_grad_field(v, field)
    return _trace_with_field(v, sigma, field, dw, cfg)


def select_lambda(v, sigma, candidates, geom, cfg):
    """Pick the candidate lam whose final-iterate SURE is smallest.

    Candidates are evaluated in ascending order and ties keep the smaller
    lam. Returns (best lam, {lam: SureReport}).
    """
    v = as_raster(v, "noisy input")
    if v.size > MAX_REGION_PIXELS:
        raise ValueError(f"region must have <= {MAX_REGION_PIXELS} pixels, got {v.size}")
    cands = sorted(float(c) for c in candidates)
    if not cands:
        raise ValueError("no candidates given")
    field = similarity_weights(v, geom)
    dw = weight_grad_field(v, field)
    reports = {}
    best = None
    for lam in cands:
        report = _trace_with_field(v, sigma, field, dw, dataclasses.replace(cfg, lam=lam))
        reports[lam] = report
        if best is None or report.sure[-1] < reports[best].sure[-1]:
            best = lam
    return best, reports


@dataclasses.dataclass
class RegionSelection:
    """Per-region candidate runs over a disjoint (edge-clamped) tiling."""

    origins_y: tuple
    origins_x: tuple
    size: int
    candidates: list
    tiles: np.ndarray  # (Ry, Rx, C, S, S) final iterates
    sure_final: np.ndarray  # (Ry, Rx, C)
    chosen: np.ndarray  # (Ry, Rx) candidate indices
    sure_traces: list  # [a][b][c] -> per-iterate SURE values

    def chosen_lambdas(self):
        return np.asarray(self.candidates)[self.chosen]


def region_selection(v, sigma, candidates, region_size, geom, cfg):
    """Run every candidate lam on every region and record final SURE values."""
    v = as_raster(v, "noisy input")
    grid = tile(v.shape[0], v.shape[1], region_size, region_size)
    cands = sorted(float(c) for c in candidates)
    ry, rx, s = len(grid.origins_y), len(grid.origins_x), region_size
    tiles = np.empty((ry, rx, len(cands), s, s))
    sure_final = np.empty((ry, rx, len(cands)))
    sure_traces = []
    for a, oy in enumerate(grid.origins_y):
        row_traces = []
        for b, ox in enumerate(grid.origins_x):
            region = v[oy : oy + s, ox : ox + s].copy()
            field = similarity_weights(region, geom)
            dw = weight_grad_field(region, field)
            cell_traces = []
            for c, lam in enumerate(cands):
                report = _trace_with_field(
                    region, sigma, field, dw, dataclasses.replace(cfg, lam=lam)
                )
                tiles[a, b, c] = report.u
                sure_final[a, b, c] = report.sure[-1]
                cell_traces.append(list(report.sure))
            row_traces.append(cell_traces)
        sure_traces.append(row_traces)
    chosen = np.argmin(sure_final, axis=2)  # first minimum = smaller lam
    return RegionSelection(
        grid.origins_y,
        grid.origins_x,
        region_size,
        cands,
        tiles,
        sure_final,
        chosen,
        sure_traces,
    )


def assemble_selection(selection, choice=None):
    """Aggregate per-region tiles into an image (sum / count on overlaps)."""
    if choice is None:
        choice = selection.chosen
    s = selection.size
    rows = selection.origins_y[-1] + s
    cols = selection.origins_x[-1] + s
    acc = np.zeros((rows, cols))
    cnt = np.zeros((rows, cols))
    for a, oy in enumerate(selection.origins_y):
        for b, ox in enumerate(selection.origins_x):
            acc[oy : oy + s, ox : ox + s] += selection.tiles[a, b, choice[a, b]]
            cnt[oy : oy + s, ox : ox + s] += 1.0
    return acc / cnt


def random_selection_psnr(selection, clean, n_draws=20, seed=0):
    """Mean PSNR over uniformly random per-region candidate assignments."""
    rng = np.random.Generator(np.random.PCG64(seed))
    shape = selection.chosen.shape
    values = []
    for _ in range(n_draws):
        draw = rng.integers(0, len(selection.candidates), size=shape)
        values.append(psnr(clean, assemble_selection(selection, draw)))
    return float(np.mean(values)), values
