# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled LSTM sequence kernels.

Same contract as ``kernels_py`` (see its module docstring). The per-timestep
recurrence runs as a C loop with BLAS dgemm for the recurrent matmul. Gate
math is fused scalar C for narrow batches (where call overhead dominates) and
vectorized slab arithmetic for wide ones (where SIMD transcendentals win).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()

# Measured crossover: the fused scalar loop beats numpy ufuncs up to roughly
# batch 8-16; above that numpy's vectorized exp/tanh pull ahead.
_WIDE_BATCH = 16


cdef inline double _sig(double z) noexcept nogil:
    return 1.0 / (1.0 + exp(-z))


cdef inline void _gemm_nn(double* a, double* b, double* out,
                          int m, int k, int n, double beta) noexcept nogil:
    # out(m,n) = a(m,k) @ b(k,n) + beta*out, all row-major.
    # Fortran BLAS sees row-major X as X^T, so compute out^T = b^T @ a^T.
    cdef double one = 1.0
    dgemm("N", "N", &n, &m, &k, &one, b, &n, a, &k, &beta, out, &n)


def layer_forward(x, w_f, w_i, w_c, w_o, b_f, b_i, b_c, b_o):
    cdef Py_ssize_t T = x.shape[0], B = x.shape[1], D = x.shape[2]
    cdef Py_ssize_t H = w_f.shape[0]

    w = np.concatenate([w_f, w_i, w_c, w_o], axis=0)
    u_t = np.ascontiguousarray(w[:, :H].T)
    v_t = np.ascontiguousarray(w[:, H:].T)
    bias = np.concatenate([b_f, b_i, b_c, b_o])

    a_arr = np.ascontiguousarray(
        (np.asarray(x).reshape(T * B, D) @ v_t + bias).reshape(T, B, 4 * H))

    h_arr = np.empty((T, B, H))
    f_arr = np.empty((T, B, H))
    i_arr = np.empty((T, B, H))
    g_arr = np.empty((T, B, H))
    o_arr = np.empty((T, B, H))
    c_arr = np.empty((T, B, H))
    tc_arr = np.empty((T, B, H))

    cdef double[:, :, ::1] a = a_arr
    cdef double[:, :, ::1] h = h_arr
    cdef double[:, :, ::1] f = f_arr
    cdef double[:, :, ::1] i = i_arr
    cdef double[:, :, ::1] g = g_arr
    cdef double[:, :, ::1] o = o_arr
    cdef double[:, :, ::1] c = c_arr
    cdef double[:, :, ::1] tc = tc_arr
    cdef double[:, ::1] u_tv = u_t

    cdef Py_ssize_t t, b, j
    cdef double ft, it, gt, ot, ct, cp
    cdef int mB = <int> B, kH = <int> H, n4H = <int> (4 * H)

    if B >= _WIDE_BATCH:
        for t in range(T):
            if t > 0:
                _gemm_nn(&h[t - 1, 0, 0], &u_tv[0, 0], &a[t, 0, 0],
                         mB, kH, n4H, 1.0)
            slab = a_arr[t]
            f_arr[t] = 1.0 / (1.0 + np.exp(-slab[:, :H]))
            i_arr[t] = 1.0 / (1.0 + np.exp(-slab[:, H:2 * H]))
            g_arr[t] = np.tanh(slab[:, 2 * H:3 * H])
            o_arr[t] = 1.0 / (1.0 + np.exp(-slab[:, 3 * H:]))
            c_arr[t] = i_arr[t] * g_arr[t] + f_arr[t] * (
                c_arr[t - 1] if t > 0 else 0.0)
            tc_arr[t] = np.tanh(c_arr[t])
            h_arr[t] = o_arr[t] * tc_arr[t]
        return h_arr, f_arr, i_arr, g_arr, o_arr, c_arr, tc_arr

    with nogil:
        for t in range(T):
            if t > 0:
                _gemm_nn(&h[t - 1, 0, 0], &u_tv[0, 0], &a[t, 0, 0],
                         mB, kH, n4H, 1.0)
            for b in range(B):
                for j in range(H):
                    ft = _sig(a[t, b, j])
                    it = _sig(a[t, b, H + j])
                    gt = tanh(a[t, b, 2 * H + j])
                    ot = _sig(a[t, b, 3 * H + j])
                    cp = c[t - 1, b, j] if t > 0 else 0.0
                    ct = it * gt + ft * cp
                    f[t, b, j] = ft
                    i[t, b, j] = it
                    g[t, b, j] = gt
                    o[t, b, j] = ot
                    c[t, b, j] = ct
                    tc[t, b, j] = tanh(ct)
                    h[t, b, j] = ot * tc[t, b, j]
    return h_arr, f_arr, i_arr, g_arr, o_arr, c_arr, tc_arr


def layer_backward(dh, x, h, f, i, g, o, c, tanh_c, w_f, w_i, w_c, w_o):
    cdef Py_ssize_t T = x.shape[0], B = x.shape[1], D = x.shape[2]
    cdef Py_ssize_t H = h.shape[2]

    w = np.concatenate([w_f, w_i, w_c, w_o], axis=0)
    u = np.ascontiguousarray(w[:, :H])
    v = np.ascontiguousarray(w[:, H:])

    da_arr = np.empty((T, B, 4 * H))
    dh_rec_arr = np.zeros((B, H))
    dc_next_arr = np.zeros((B, H))

    cdef double[:, :, ::1] da = da_arr
    cdef double[:, :, ::1] dhv = np.ascontiguousarray(dh)
    cdef double[:, :, ::1] hv = np.ascontiguousarray(h)
    cdef double[:, :, ::1] fv = f
    cdef double[:, :, ::1] iv = i
    cdef double[:, :, ::1] gv = g
    cdef double[:, :, ::1] ov = o
    cdef double[:, :, ::1] cv = c
    cdef double[:, :, ::1] tcv = tanh_c
    cdef double[:, ::1] uv = u
    cdef double[:, ::1] dh_rec = dh_rec_arr
    cdef double[:, ::1] dc_next = dc_next_arr

    cdef Py_ssize_t t, b, j
    cdef double dht, dcv, dov, cp, tcx, fx, ix, gx, ox
    cdef int mB = <int> B, k4H = <int> (4 * H), nH = <int> H

    with nogil:
        for t in range(T - 1, -1, -1):
            for b in range(B):
                for j in range(H):
                    dht = dhv[t, b, j] + dh_rec[b, j]
                    tcx = tcv[t, b, j]
                    fx = fv[t, b, j]
                    ix = iv[t, b, j]
                    gx = gv[t, b, j]
                    ox = ov[t, b, j]
                    dov = dht * tcx
                    dcv = dht * ox * (1.0 - tcx * tcx) + dc_next[b, j]
                    cp = cv[t - 1, b, j] if t > 0 else 0.0
                    da[t, b, j] = dcv * cp * fx * (1.0 - fx)
                    da[t, b, H + j] = dcv * gx * ix * (1.0 - ix)
                    da[t, b, 2 * H + j] = dcv * ix * (1.0 - gx * gx)
                    da[t, b, 3 * H + j] = dov * ox * (1.0 - ox)
                    dc_next[b, j] = dcv * fx
            _gemm_nn(&da[t, 0, 0], &uv[0, 0], &dh_rec[0, 0],
                     mB, k4H, nH, 0.0)

    da2 = da_arr.reshape(T * B, 4 * H)
    dx = (da2 @ v).reshape(T, B, D)
    h_prev = np.concatenate(
        [np.zeros((1, B, H)), np.asarray(h)[:-1]], axis=0).reshape(T * B, H)
    du = da2.T @ h_prev
    dvm = da2.T @ np.asarray(x).reshape(T * B, D)
    db = da2.sum(axis=0)
    dw = np.concatenate([du, dvm], axis=1)
    return (dx,
            dw[:H], dw[H:2 * H], dw[2 * H:3 * H], dw[3 * H:],
            db[:H], db[H:2 * H], db[2 * H:3 * H], db[3 * H:])
