"""Energies, gradients and the monotone descent driver.

The objective is

    E(u) = lam   * sum_i  m_s(i; u)      (spatial regularizer, optional)
         + lam_f * sum_w  m_f(w; u_hat)  (frequency regularizer, optional)
         + 1/2 * sum_i (u(i) - v(i))^2   (fidelity, always)

where both magnitudes are smoothed inside the square root,
m(i) = sqrt(beta + sum_j |.|^2 w(i, j)), so the gradients below are exact
gradients of the implemented energy. Weight fields are built from the
noisy input once and stay fixed.
"""

import dataclasses
import math

import numpy as np

from . import backend
from .raster import as_raster
from .spectral import dft2, idft2_real


@dataclasses.dataclass
class SolverConfig:
    lam: float = 0.0
    lam_f: float = 0.0
    beta: float = 1e-2
    t_init: float = 0.2
    max_halvings: int = 30
    n_iter: int = 50
    eps: float = 0.0

    def __post_init__(self):
        if self.lam < 0 or self.lam_f < 0:
            raise ValueError("regularizer strengths must be >= 0")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.t_init <= 0:
            raise ValueError(f"t_init must be > 0, got {self.t_init}")
        if self.max_halvings < 0 or self.n_iter < 1:
            raise ValueError("max_halvings must be >= 0 and n_iter >= 1")
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")


@dataclasses.dataclass
class DescentTrace:
    u: np.ndarray
    energies: list  # E(u^0) .. E(u^K)
    steps: list  # accepted step sizes, one per iteration
    stop_reason: str  # "iterations" | "gradient-zero" | "small-change"
    iterates: list | None = None  # u^0 .. u^K when requested


class StepSearchError(RuntimeError):
    """No energy-decreasing step found within the halving budget."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def nonlocal_magnitude(u, field, beta):
    """Smoothed magnitude m(i) at every grid point; u real or complex."""
    return backend.kernels.magnitude_field(u, field.planes, field.offsets, beta)


def nl_magnitude(u, field, i, beta):
    """m(i) at a single pixel, summed directly from the stored planes."""
    u = np.asarray(u)
    m, n = u.shape
    from .raster import reflect_index

    acc = beta
    for k in range(field.offsets.shape[0]):
        jy = reflect_index(i[0] + int(field.offsets[k, 0]), m)
        jx = reflect_index(i[1] + int(field.offsets[k, 1]), n)
        d = u[i[0], i[1]] - u[jy, jx]
        acc += (d.real * d.real + d.imag * d.imag if np.iscomplexobj(u) else d * d) * field.planes[
            k, i[0], i[1]
        ]
    return float(math.sqrt(acc))


def _fidelity(u, v):
    d = u - v
    return 0.5 * float(np.sum(d * d))


def sfnltv_energy(u, v, spatial, frequency, lam, lam_f, beta):
    """Combined objective; either regularizer may be disabled."""
    e = _fidelity(u, v)
    if spatial is not None and lam > 0:
        e += lam * float(np.sum(nonlocal_magnitude(u, spatial, beta)))
    if frequency is not None and lam_f > 0:
        e += lam_f * float(np.sum(nonlocal_magnitude(dft2(u), frequency, beta)))
    return e


def sfnltv_gradient(u, v, spatial, frequency, lam, lam_f, beta):
    """Exact gradient of sfnltv_energy at u."""
    g = u - v
    if spatial is not None and lam > 0:
        mags = nonlocal_magnitude(u, spatial, beta)
        g = g + lam * backend.kernels.reg_gradient(u, spatial.planes, mags, spatial.offsets)
    if frequency is not None and lam_f > 0:
        uh = dft2(u)
        mags = nonlocal_magnitude(uh, frequency, beta)
        fh = backend.kernels.reg_gradient(uh, frequency.planes, mags, frequency.offsets)
        g = g + lam_f * idft2_real(fh)
    return g


def nltv_energy(u, v, field, lam, beta):
    return sfnltv_energy(u, v, field, None, lam, 0.0, beta)


def nltv_gradient(u, v, field, lam, beta):
    return sfnltv_gradient(u, v, field, None, lam, 0.0, beta)


def fnltv_energy(u, v, field, lam_f, beta):
    return sfnltv_energy(u, v, None, field, 0.0, lam_f, beta)


def fnltv_gradient(u, v, field, lam_f, beta):
    return sfnltv_gradient(u, v, None, field, 0.0, lam_f, beta)


def descend(
    v,
    cfg,
    spatial=None,
    frequency=None,
    keep_iterates=False,
    forced_steps=None,
    step_callback=None,
):
    """Gradient descent from u = v with a monotone backtracking step search.

    Each iteration tries the previously accepted step first and halves until
    the energy strictly decreases (at most cfg.max_halvings times). Stops on
    the iteration budget, an exactly zero gradient, or an update smaller
    than cfg.eps * sqrt(MN) when cfg.eps > 0.

    forced_steps skips the search and applies the given steps verbatim; the
    Jacobian propagation tests rely on this to differentiate a fixed map.
    step_callback(k, u_before, grad, t) runs after each accepted step.
    """
    v = as_raster(v, "noisy input")
    u = v.copy()
    energy = sfnltv_energy(u, v, spatial, frequency, cfg.lam, cfg.lam_f, cfg.beta)
    energies = [energy]
    steps = []
    iterates = [u.copy()] if keep_iterates else None
    trial = cfg.t_init
    n_iter = cfg.n_iter if forced_steps is None else len(forced_steps)
    stop_reason = "iterations"
    scale = math.sqrt(u.size)

    for k in range(n_iter):
        grad = sfnltv_gradient(u, v, spatial, frequency, cfg.lam, cfg.lam_f, cfg.beta)
        if not grad.any():
            stop_reason = "gradient-zero"
            break
        if forced_steps is not None:
            t = float(forced_steps[k])
            u_next = u - t * grad
            e_next = sfnltv_energy(u_next, v, spatial, frequency, cfg.lam, cfg.lam_f, cfg.beta)
        else:
            t = trial
            for attempt in range(cfg.max_halvings + 1):
                u_next = u - t * grad
                e_next = sfnltv_energy(u_next, v, spatial, frequency, cfg.lam, cfg.lam_f, cfg.beta)
                if e_next < energy:
                    break
                t *= 0.5
            else:
                raise StepSearchError(
                    f"no decreasing step after {cfg.max_halvings} halvings at iteration {k}",
                    DescentTrace(u, energies, steps, "step-search-failure", iterates),
                )
            trial = t
        if step_callback is not None:
            step_callback(k, u, grad, t)
        change = float(np.linalg.norm(u_next - u))
        u = u_next
        energy = e_next
        energies.append(energy)
        steps.append(t)
        if keep_iterates:
            iterates.append(u.copy())
        if cfg.eps > 0 and change < cfg.eps * scale:
            stop_reason = "small-change"
            break

    return DescentTrace(u, energies, steps, stop_reason, iterates)
