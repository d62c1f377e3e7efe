"""Pure-numpy kernels: the fallback backend.

Every function here has a signature-identical twin in the compiled
extension. Both accumulate patch terms in the same raster order, so
within a backend results are deterministic; across backends they agree
to rounding.

Conventions:
  - fields are (M, N) float64 or complex128, C-ordered
  - offsets is (K, 2) int64 window displacements (dy, dx), center excluded
  - planes is (K, M, N) float64, planes[k][i] = weight from pixel i toward
    its (possibly reflected) neighbor at offsets[k]
"""

import numpy as np

BACKEND_NAME = "numpy"


def _reflect(idx, n):
    idx = idx % (2 * n)
    return np.where(idx >= n, 2 * n - 1 - idx, idx)


def _shifted_range(n, shift):
    return _reflect(np.arange(n, dtype=np.int64) + shift, n)


def _gather(field, oy, ox):
    """field[R(i + o)] for every pixel i, axes reflected independently."""
    m, n = field.shape
    return field[np.ix_(_shifted_range(m, oy), _shifted_range(n, ox))]


def _scatter_axis0(t, s):
    """Adjoint of the axis-0 reflected shift: out[r] = sum over {y: R(y+s)=r}."""
    n = t.shape[0]
    out = np.zeros_like(t)
    if s == 0:
        out += t
        return out
    if abs(s) >= n:  # reflection wraps more than once; fall back to indexing
        np.add.at(out, _shifted_range(n, s), t)
        return out
    if s > 0:
        out[s:] += t[: n - s]
        out[n - s :] += t[n - s :][::-1]
    else:
        out[: n + s] += t[-s:]
        out[: -s] += t[: -s][::-1]
    return out


def _scatter(t, oy, ox):
    """Adjoint of _gather: out[q] = sum of t[i] over {i: R(i + o) = q}."""
    rows = _scatter_axis0(t, oy)
    return _scatter_axis0(rows.T, ox).T


def _sqmod(d):
    if np.iscomplexobj(d):
        return d.real * d.real + d.imag * d.imag
    return d * d


def weight_planes(field, offsets, patch_offsets, patch_kernel, inv_two_sigma2):
    """Similarity weights toward every window neighbor of every pixel.

    plane[k][i] = exp(-pd(i, R(i + o_k)) * inv_two_sigma2) where pd is the
    kernel-weighted mean of squared patch-sample differences, samples taken
    at reflected positions.
    """
    m, n = field.shape
    kcount = offsets.shape[0]
    norm = float(patch_kernel.sum())
    out = np.empty((kcount, m, n))
    for k in range(kcount):
        oy, ox = int(offsets[k, 0]), int(offsets[k, 1])
        jr = _shifted_range(m, oy)
        jc = _shifted_range(n, ox)
        acc = np.zeros((m, n))
        for p in range(patch_offsets.shape[0]):
            py, px = int(patch_offsets[p, 0]), int(patch_offsets[p, 1])
            a = field[np.ix_(_shifted_range(m, py), _shifted_range(n, px))]
            b = field[np.ix_(_reflect(jr + py, m), _reflect(jc + px, n))]
            acc += patch_kernel[p] * _sqmod(a - b)
        out[k] = np.exp(-(acc / norm) * inv_two_sigma2)
    return out


def magnitude_field(field, planes, offsets, beta):
    """Smoothed weighted-difference magnitude at every pixel.

    m(i) = sqrt(beta + sum_k |field(i) - field(R(i + o_k))|^2 * plane[k][i])
    """
    acc = np.zeros(field.shape)
    for k in range(offsets.shape[0]):
        d = field - _gather(field, int(offsets[k, 0]), int(offsets[k, 1]))
        acc += _sqmod(d) * planes[k]
    return np.sqrt(acc + beta)


def reg_gradient(field, planes, mags, offsets):
    """Gradient of sum_i m(i) with respect to the field.

    Gather/scatter over directed neighbor pairs: each pair (i -> j)
    contributes (field(i) - field(j)) * plane(i) / m(i) at i and its
    negative at j, which is exact also for asymmetric weight fields and
    for duplicated boundary pairs.
    """
    g = np.zeros_like(field)
    for k in range(offsets.shape[0]):
        oy, ox = int(offsets[k, 0]), int(offsets[k, 1])
        t = (planes[k] / mags) * (field - _gather(field, oy, ox))
        g += t
        g -= _scatter(t, oy, ox)
    return g


def nl_means_kernel(v, planes, offsets):
    """Weighted window average with the center pixel included at weight 1."""
    num = v.copy()
    den = np.ones_like(v)
    for k in range(offsets.shape[0]):
        num += planes[k] * _gather(v, int(offsets[k, 0]), int(offsets[k, 1]))
        den += planes[k]
    return num / den


def weight_grad_planes(v, planes, offsets, patch_offsets, patch_kernel, sigma_r):
    """Dense derivative of every weight with respect to every input pixel.

    Output dw has shape (K, P, P), P = M*N: dw[k][i, l] is the derivative
    of plane[k] at pixel i with respect to v at flat index l. Only region
    sized inputs are expected; callers enforce the size cap.
    """
    m, n = v.shape
    p_count = m * n
    kcount = offsets.shape[0]
    norm = float(patch_kernel.sum())
    scale = -1.0 / (sigma_r * sigma_r * norm)
    vflat = v.ravel()
    rows = np.arange(p_count)
    dw = np.zeros((kcount, p_count, p_count))
    for k in range(kcount):
        oy, ox = int(offsets[k, 0]), int(offsets[k, 1])
        jr = _shifted_range(m, oy)
        jc = _shifted_range(n, ox)
        coeff = (planes[k] * scale).ravel()
        for p in range(patch_offsets.shape[0]):
            py, px = int(patch_offsets[p, 0]), int(patch_offsets[p, 1])
            ir = _shifted_range(m, py)
            ic = _shifted_range(n, px)
            ki = (ir[:, None] * n + ic[None, :]).ravel()
            kj = (_reflect(jr + py, m)[:, None] * n + _reflect(jc + px, n)[None, :]).ravel()
            val = (coeff * patch_kernel[p]) * (vflat[ki] - vflat[kj])
            np.add.at(dw[k], (rows, ki), val)
            np.add.at(dw[k], (rows, kj), -val)
    return dw


def neighbor_maps(shape, offsets):
    """Flat index of R(i + o_k) for every pixel i, shape (K, M*N)."""
    m, n = shape
    maps = np.empty((offsets.shape[0], m * n), dtype=np.int64)
    for k in range(offsets.shape[0]):
        jr = _shifted_range(m, int(offsets[k, 0]))
        jc = _shifted_range(n, int(offsets[k, 1]))
        maps[k] = (jr[:, None] * n + jc[None, :]).ravel()
    return maps


def jac_reg_step(uflat, mflat, wflat, nbmaps, jmat, dw):
    """Jacobian of the regularizer gradient with respect to the noisy input.

    Given the iterate Jacobian jmat = du/dv (P, P), returns d/dv of
    reg_gradient(u) as a (P, P) matrix. wflat is (K, P) weights, nbmaps the
    (K, P) flat neighbor maps, dw the dense weight derivatives (K, P, P).
    Chain rule per directed pair plus the derivative of 1/m through both
    the iterate and the weights.
    """
    p_count = jmat.shape[0]
    # dm[i, l] = d m(i) / d v(l), assembled from the same pairs as m itself.
    qnum = np.zeros((p_count, p_count))
    for k in range(nbmaps.shape[0]):
        nb = nbmaps[k]
        delta = uflat - uflat[nb]
        jd = jmat - jmat[nb]
        qnum += (delta * wflat[k])[:, None] * jd
        qnum += (0.5 * delta * delta)[:, None] * dw[k]
    q = qnum / mflat[:, None]
    g = np.zeros((p_count, p_count))
    for k in range(nbmaps.shape[0]):
        nb = nbmaps[k]
        delta = uflat - uflat[nb]
        jd = jmat - jmat[nb]
        rc = (wflat[k] / mflat)[:, None] * jd
        rc += (delta / mflat)[:, None] * dw[k]
        rc -= (delta * wflat[k] / (mflat * mflat))[:, None] * q
        g += rc
        np.subtract.at(g, nb, rc)
    return g
