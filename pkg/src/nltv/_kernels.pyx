# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: signature-identical twin of _kernels_np.

Same per-pixel accumulation order as the fallback (patch terms in raster
order), so both backends agree to rounding and each is deterministic.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

BACKEND_NAME = "cython"

ctypedef cnp.int64_t i64


cdef inline Py_ssize_t refl(Py_ssize_t k, Py_ssize_t n) nogil:
    cdef Py_ssize_t period = 2 * n
    k %= period
    if k < 0:
        k += period
    if k >= n:
        k = period - 1 - k
    return k


# ---------------------------------------------------------------------------
# weight planes

def _weight_planes_real(double[:, ::1] f, i64[:, ::1] offs, i64[:, ::1] poffs,
                        double[::1] pk, double inv2s2):
    cdef Py_ssize_t m = f.shape[0], n = f.shape[1]
    cdef Py_ssize_t kn = offs.shape[0], pn = poffs.shape[0]
    cdef Py_ssize_t k, y, x, p, ra, rb
    cdef double d, a, norm = 0.0
    out_arr = np.empty((kn, m, n))
    cdef double[:, :, ::1] out = out_arr
    # Reflection is separable, so sample positions reduce to per-axis
    # index tables: refl(i + p) around the pixel, refl(refl(i + o) + p)
    # around its neighbor. Patch terms still accumulate in raster order.
    ay_arr = np.empty((pn, m), dtype=np.int64)
    ax_arr = np.empty((pn, n), dtype=np.int64)
    by_arr = np.empty((pn, m), dtype=np.int64)
    bx_arr = np.empty((pn, n), dtype=np.int64)
    acc_arr = np.empty(n)
    cdef i64[:, ::1] ay = ay_arr, ax = ax_arr, by = by_arr, bx = bx_arr
    cdef double[::1] acc = acc_arr
    for p in range(pn):
        norm += pk[p]
    with nogil:
        for p in range(pn):
            for y in range(m):
                ay[p, y] = refl(y + poffs[p, 0], m)
            for x in range(n):
                ax[p, x] = refl(x + poffs[p, 1], n)
        for k in range(kn):
            for p in range(pn):
                for y in range(m):
                    by[p, y] = refl(refl(y + offs[k, 0], m) + poffs[p, 0], m)
                for x in range(n):
                    bx[p, x] = refl(refl(x + offs[k, 1], n) + poffs[p, 1], n)
            for y in range(m):
                for x in range(n):
                    acc[x] = 0.0
                for p in range(pn):
                    a = pk[p]
                    ra = ay[p, y]
                    rb = by[p, y]
                    for x in range(n):
                        d = f[ra, ax[p, x]] - f[rb, bx[p, x]]
                        acc[x] += a * (d * d)
                for x in range(n):
                    out[k, y, x] = exp(-(acc[x] / norm) * inv2s2)
    return out_arr


def _weight_planes_complex(double[:, ::1] fr, double[:, ::1] fi, i64[:, ::1] offs,
                           i64[:, ::1] poffs, double[::1] pk, double inv2s2):
    cdef Py_ssize_t m = fr.shape[0], n = fr.shape[1]
    cdef Py_ssize_t kn = offs.shape[0], pn = poffs.shape[0]
    cdef Py_ssize_t k, y, x, p, ra, rb, ca, cb
    cdef double dr, di, a, norm = 0.0
    out_arr = np.empty((kn, m, n))
    cdef double[:, :, ::1] out = out_arr
    ay_arr = np.empty((pn, m), dtype=np.int64)
    ax_arr = np.empty((pn, n), dtype=np.int64)
    by_arr = np.empty((pn, m), dtype=np.int64)
    bx_arr = np.empty((pn, n), dtype=np.int64)
    acc_arr = np.empty(n)
    cdef i64[:, ::1] ay = ay_arr, ax = ax_arr, by = by_arr, bx = bx_arr
    cdef double[::1] acc = acc_arr
    for p in range(pn):
        norm += pk[p]
    with nogil:
        for p in range(pn):
            for y in range(m):
                ay[p, y] = refl(y + poffs[p, 0], m)
            for x in range(n):
                ax[p, x] = refl(x + poffs[p, 1], n)
        for k in range(kn):
            for p in range(pn):
                for y in range(m):
                    by[p, y] = refl(refl(y + offs[k, 0], m) + poffs[p, 0], m)
                for x in range(n):
                    bx[p, x] = refl(refl(x + offs[k, 1], n) + poffs[p, 1], n)
            for y in range(m):
                for x in range(n):
                    acc[x] = 0.0
                for p in range(pn):
                    a = pk[p]
                    ra = ay[p, y]
                    rb = by[p, y]
                    for x in range(n):
                        ca = ax[p, x]
                        cb = bx[p, x]
                        dr = fr[ra, ca] - fr[rb, cb]
                        di = fi[ra, ca] - fi[rb, cb]
                        acc[x] += a * (dr * dr + di * di)
                for x in range(n):
                    out[k, y, x] = exp(-(acc[x] / norm) * inv2s2)
    return out_arr


def weight_planes(field, offsets, patch_offsets, patch_kernel, inv_two_sigma2):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    poffs = np.ascontiguousarray(patch_offsets, dtype=np.int64)
    pk = np.ascontiguousarray(patch_kernel, dtype=np.float64)
    if np.iscomplexobj(field):
        fr = np.ascontiguousarray(field.real, dtype=np.float64)
        fi = np.ascontiguousarray(field.imag, dtype=np.float64)
        return _weight_planes_complex(fr, fi, offs, poffs, pk, inv_two_sigma2)
    f = np.ascontiguousarray(field, dtype=np.float64)
    return _weight_planes_real(f, offs, poffs, pk, inv_two_sigma2)


# ---------------------------------------------------------------------------
# smoothed magnitudes

cdef void neighbor_tables(i64[:, ::1] offs, Py_ssize_t m, Py_ssize_t n,
                          i64[:, ::1] jy, i64[:, ::1] jx) nogil:
    # Per-axis reflected neighbor coordinates, one row per window offset.
    cdef Py_ssize_t k, y, x
    for k in range(offs.shape[0]):
        for y in range(m):
            jy[k, y] = refl(y + offs[k, 0], m)
        for x in range(n):
            jx[k, x] = refl(x + offs[k, 1], n)


def _magnitude_real(double[:, ::1] u, double[:, :, ::1] planes, i64[:, ::1] offs,
                    double beta):
    cdef Py_ssize_t m = u.shape[0], n = u.shape[1], kn = offs.shape[0]
    cdef Py_ssize_t k, y, x
    cdef double acc, d
    out_arr = np.empty((m, n))
    cdef double[:, ::1] out = out_arr
    jy_arr = np.empty((kn, m), dtype=np.int64)
    jx_arr = np.empty((kn, n), dtype=np.int64)
    cdef i64[:, ::1] jy = jy_arr, jx = jx_arr
    with nogil:
        neighbor_tables(offs, m, n, jy, jx)
        for y in range(m):
            for x in range(n):
                acc = beta
                for k in range(kn):
                    d = u[y, x] - u[jy[k, y], jx[k, x]]
                    acc += (d * d) * planes[k, y, x]
                out[y, x] = sqrt(acc)
    return out_arr


def _magnitude_complex(double[:, ::1] ur, double[:, ::1] ui, double[:, :, ::1] planes,
                       i64[:, ::1] offs, double beta):
    cdef Py_ssize_t m = ur.shape[0], n = ur.shape[1], kn = offs.shape[0]
    cdef Py_ssize_t k, y, x, ny, nx
    cdef double acc, dr, di
    out_arr = np.empty((m, n))
    cdef double[:, ::1] out = out_arr
    jy_arr = np.empty((kn, m), dtype=np.int64)
    jx_arr = np.empty((kn, n), dtype=np.int64)
    cdef i64[:, ::1] jy = jy_arr, jx = jx_arr
    with nogil:
        neighbor_tables(offs, m, n, jy, jx)
        for y in range(m):
            for x in range(n):
                acc = beta
                for k in range(kn):
                    ny = jy[k, y]
                    nx = jx[k, x]
                    dr = ur[y, x] - ur[ny, nx]
                    di = ui[y, x] - ui[ny, nx]
                    acc += (dr * dr + di * di) * planes[k, y, x]
                out[y, x] = sqrt(acc)
    return out_arr


def magnitude_field(field, planes, offsets, beta):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    pl = np.ascontiguousarray(planes, dtype=np.float64)
    if np.iscomplexobj(field):
        ur = np.ascontiguousarray(field.real, dtype=np.float64)
        ui = np.ascontiguousarray(field.imag, dtype=np.float64)
        return _magnitude_complex(ur, ui, pl, offs, beta)
    u = np.ascontiguousarray(field, dtype=np.float64)
    return _magnitude_real(u, pl, offs, beta)


# ---------------------------------------------------------------------------
# regularizer gradient (gather + scatter over directed pairs)

def _reg_gradient_real(double[:, ::1] u, double[:, :, ::1] planes, double[:, ::1] mags,
                       i64[:, ::1] offs):
    cdef Py_ssize_t m = u.shape[0], n = u.shape[1], kn = offs.shape[0]
    cdef Py_ssize_t k, y, x, ny, nx
    cdef double t
    out_arr = np.zeros((m, n))
    cdef double[:, ::1] g = out_arr
    jy_arr = np.empty((kn, m), dtype=np.int64)
    jx_arr = np.empty((kn, n), dtype=np.int64)
    cdef i64[:, ::1] jy = jy_arr, jx = jx_arr
    with nogil:
        neighbor_tables(offs, m, n, jy, jx)
        for y in range(m):
            for x in range(n):
                for k in range(kn):
                    ny = jy[k, y]
                    nx = jx[k, x]
                    t = (planes[k, y, x] / mags[y, x]) * (u[y, x] - u[ny, nx])
                    g[y, x] += t
                    g[ny, nx] -= t
    return out_arr


def _reg_gradient_complex(double[:, ::1] ur, double[:, ::1] ui, double[:, :, ::1] planes,
                          double[:, ::1] mags, i64[:, ::1] offs):
    cdef Py_ssize_t m = ur.shape[0], n = ur.shape[1], kn = offs.shape[0]
    cdef Py_ssize_t k, y, x, ny, nx
    cdef double c, tr, ti
    gr_arr = np.zeros((m, n))
    gi_arr = np.zeros((m, n))
    cdef double[:, ::1] gr = gr_arr
    cdef double[:, ::1] gi = gi_arr
    jy_arr = np.empty((kn, m), dtype=np.int64)
    jx_arr = np.empty((kn, n), dtype=np.int64)
    cdef i64[:, ::1] jy = jy_arr, jx = jx_arr
    with nogil:
        neighbor_tables(offs, m, n, jy, jx)
        for y in range(m):
            for x in range(n):
                for k in range(kn):
                    ny = jy[k, y]
                    nx = jx[k, x]
                    c = planes[k, y, x] / mags[y, x]
                    tr = c * (ur[y, x] - ur[ny, nx])
                    ti = c * (ui[y, x] - ui[ny, nx])
                    gr[y, x] += tr
                    gi[y, x] += ti
                    gr[ny, nx] -= tr
                    gi[ny, nx] -= ti
    return gr_arr, gi_arr


def reg_gradient(field, planes, mags, offsets):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    pl = np.ascontiguousarray(planes, dtype=np.float64)
    mg = np.ascontiguousarray(mags, dtype=np.float64)
    if np.iscomplexobj(field):
        ur = np.ascontiguousarray(field.real, dtype=np.float64)
        ui = np.ascontiguousarray(field.imag, dtype=np.float64)
        gr, gi = _reg_gradient_complex(ur, ui, pl, mg, offs)
        return gr + 1j * gi
    u = np.ascontiguousarray(field, dtype=np.float64)
    return _reg_gradient_real(u, pl, mg, offs)


# ---------------------------------------------------------------------------
# filtering baseline

def nl_means_kernel(v, planes, offsets):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    pl = np.ascontiguousarray(planes, dtype=np.float64)
    vv = np.ascontiguousarray(v, dtype=np.float64)
    return _nl_means(vv, pl, offs)


def _nl_means(double[:, ::1] v, double[:, :, ::1] planes, i64[:, ::1] offs):
    cdef Py_ssize_t m = v.shape[0], n = v.shape[1], kn = offs.shape[0]
    cdef Py_ssize_t k, y, x
    cdef double num, den, w
    out_arr = np.empty((m, n))
    cdef double[:, ::1] out = out_arr
    jy_arr = np.empty((kn, m), dtype=np.int64)
    jx_arr = np.empty((kn, n), dtype=np.int64)
    cdef i64[:, ::1] jy = jy_arr, jx = jx_arr
    with nogil:
        neighbor_tables(offs, m, n, jy, jx)
        for y in range(m):
            for x in range(n):
                num = v[y, x]
                den = 1.0
                for k in range(kn):
                    w = planes[k, y, x]
                    num += w * v[jy[k, y], jx[k, x]]
                    den += w
                out[y, x] = num / den
    return out_arr


# ---------------------------------------------------------------------------
# dense weight derivatives and the Jacobian step (region scale)

def weight_grad_planes(v, planes, offsets, patch_offsets, patch_kernel, sigma_r):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    poffs = np.ascontiguousarray(patch_offsets, dtype=np.int64)
    pk = np.ascontiguousarray(patch_kernel, dtype=np.float64)
    pl = np.ascontiguousarray(planes, dtype=np.float64)
    vv = np.ascontiguousarray(v, dtype=np.float64)
    return _weight_grad(vv, pl, offs, poffs, pk, sigma_r)


def _weight_grad(double[:, ::1] v, double[:, :, ::1] planes, i64[:, ::1] offs,
                 i64[:, ::1] poffs, double[::1] pk, double sigma_r):
    cdef Py_ssize_t m = v.shape[0], n = v.shape[1]
    cdef Py_ssize_t kn = offs.shape[0], pn = poffs.shape[0]
    cdef Py_ssize_t p_count = m * n
    cdef Py_ssize_t k, y, x, p, jy, jx, i, ay, ax, by, bx, ki, kj
    cdef double norm = 0.0, scale, coeff, val
    cdef Py_ssize_t q
    for q in range(pn):
        norm += pk[q]
    scale = -1.0 / (sigma_r * sigma_r * norm)
    dw_arr = np.zeros((kn, p_count, p_count))
    cdef double[:, :, ::1] dw = dw_arr
    with nogil:
        for k in range(kn):
            for y in range(m):
                jy = refl(y + offs[k, 0], m)
                for x in range(n):
                    jx = refl(x + offs[k, 1], n)
                    i = y * n + x
                    coeff = planes[k, y, x] * scale
                    for p in range(pn):
                        ay = refl(y + poffs[p, 0], m)
                        ax = refl(x + poffs[p, 1], n)
                        by = refl(jy + poffs[p, 0], m)
                        bx = refl(jx + poffs[p, 1], n)
                        ki = ay * n + ax
                        kj = by * n + bx
                        val = coeff * pk[p] * (v[ay, ax] - v[by, bx])
                        dw[k, i, ki] += val
                        dw[k, i, kj] -= val
    return dw_arr


def neighbor_maps(shape, offsets):
    offs = np.ascontiguousarray(offsets, dtype=np.int64)
    m, n = int(shape[0]), int(shape[1])
    out_arr = np.empty((offs.shape[0], m * n), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64[:, ::1] ov = offs
    cdef Py_ssize_t mm = m, nn = n, k, y, x
    with nogil:
        for k in range(ov.shape[0]):
            for y in range(mm):
                for x in range(nn):
                    out[k, y * nn + x] = refl(y + ov[k, 0], mm) * nn + refl(x + ov[k, 1], nn)
    return out_arr


def jac_reg_step(uflat, mflat, wflat, nbmaps, jmat, dw):
    u = np.ascontiguousarray(uflat, dtype=np.float64)
    mg = np.ascontiguousarray(mflat, dtype=np.float64)
    w = np.ascontiguousarray(wflat, dtype=np.float64)
    nb = np.ascontiguousarray(nbmaps, dtype=np.int64)
    jm = np.ascontiguousarray(jmat, dtype=np.float64)
    dww = np.ascontiguousarray(dw, dtype=np.float64)
    return _jac_reg_step(u, mg, w, nb, jm, dww)


def _jac_reg_step(double[::1] u, double[::1] mg, double[:, ::1] w, i64[:, ::1] nb,
                  double[:, ::1] jmat, double[:, :, ::1] dw):
    cdef Py_ssize_t p_count = jmat.shape[0], kn = w.shape[0]
    cdef Py_ssize_t i, k, l, j
    cdef double delta, c1, c2, wk, a1, a2, a3, rc, inv
    q_arr = np.zeros((p_count, p_count))
    g_arr = np.zeros((p_count, p_count))
    cdef double[:, ::1] q = q_arr
    cdef double[:, ::1] g = g_arr
    with nogil:
        # dm/dv rows: through the iterate (via jmat) and through the weights
        for i in range(p_count):
            for k in range(kn):
                j = nb[k, i]
                delta = u[i] - u[j]
                c1 = delta * w[k, i]
                c2 = 0.5 * delta * delta
                for l in range(p_count):
                    q[i, l] += c1 * (jmat[i, l] - jmat[j, l]) + c2 * dw[k, i, l]
            inv = 1.0 / mg[i]
            for l in range(p_count):
                q[i, l] *= inv
        # gather/scatter the directed-pair rows
        for i in range(p_count):
            for k in range(kn):
                j = nb[k, i]
                delta = u[i] - u[j]
                wk = w[k, i]
                a1 = wk / mg[i]
                a2 = delta / mg[i]
                a3 = delta * wk / (mg[i] * mg[i])
                for l in range(p_count):
                    rc = (a1 * (jmat[i, l] - jmat[j, l])
                          + a2 * dw[k, i, l]
                          - a3 * q[i, l])
                    g[i, l] += rc
                    g[j, l] -= rc
    return g_arr
