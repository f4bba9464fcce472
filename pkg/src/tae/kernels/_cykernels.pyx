# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: direct-loop conv2d (stride 1) and 2x2 max pooling.

Same contracts as tae.kernels.pykernels; loop order is fixed so results are
deterministic run to run.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

from tae.kernels.pykernels import conv_pads, upsample2_forward, upsample2_backward


def conv2d_forward(cnp.ndarray x_arr, cnp.ndarray w_arr, cnp.ndarray b_arr,
                   str padding="same"):
    cdef double[:, :, :, ::1] x = np.ascontiguousarray(x_arr)
    cdef double[:, :, :, ::1] w = np.ascontiguousarray(w_arr)
    cdef double[::1] b = np.ascontiguousarray(b_arr)
    cdef Py_ssize_t S = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t K = w.shape[0], kh = w.shape[2], kw = w.shape[3]
    pt_, pb_, pl_, pr_ = conv_pads(kh, kw, padding)
    cdef Py_ssize_t pt = pt_, pb = pb_, pl = pl_, pr = pr_
    cdef Py_ssize_t Ho = H + pt + pb - kh + 1, Wo = W + pl + pr - kw + 1
    out_arr = np.empty((S, K, Ho, Wo), dtype=np.float64)
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t s, k, c, u, v, i, j, i0, i1, j0, j1, yi
    cdef double wkv, bk

    with nogil:
        for s in range(S):
            for k in range(K):
                bk = b[k]
                for i in range(Ho):
                    for j in range(Wo):
                        out[s, k, i, j] = bk
                for c in range(C):
                    for u in range(kh):
                        i0 = pt - u if pt - u > 0 else 0
                        i1 = H + pt - u if H + pt - u < Ho else Ho
                        for v in range(kw):
                            wkv = w[k, c, u, v]
                            j0 = pl - v if pl - v > 0 else 0
                            j1 = W + pl - v if W + pl - v < Wo else Wo
                            for i in range(i0, i1):
                                yi = i + u - pt
                                for j in range(j0, j1):
                                    out[s, k, i, j] += x[s, c, yi, j + v - pl] * wkv
    return out_arr


def conv2d_backward(cnp.ndarray x_arr, cnp.ndarray w_arr, cnp.ndarray gout_arr,
                    str padding="same", bint need_gx=True):
    cdef double[:, :, :, ::1] x = np.ascontiguousarray(x_arr)
    cdef double[:, :, :, ::1] w = np.ascontiguousarray(w_arr)
    cdef double[:, :, :, ::1] gout = np.ascontiguousarray(gout_arr)
    cdef Py_ssize_t S = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t K = w.shape[0], kh = w.shape[2], kw = w.shape[3]
    pt_, pb_, pl_, pr_ = conv_pads(kh, kw, padding)
    cdef Py_ssize_t pt = pt_, pl = pl_
    cdef Py_ssize_t Ho = gout.shape[2], Wo = gout.shape[3]

    gb_arr = np.asarray(gout_arr).sum(axis=(0, 2, 3))
    gw_arr = np.zeros((K, C, kh, kw), dtype=np.float64)
    cdef double[:, :, :, ::1] gw = gw_arr
    cdef Py_ssize_t s, k, c, u, v, i, j, i0, i1, j0, j1, yi
    cdef double acc, wkv

    with nogil:
        for k in range(K):
            for c in range(C):
                for u in range(kh):
                    i0 = pt - u if pt - u > 0 else 0
                    i1 = H + pt - u if H + pt - u < Ho else Ho
                    for v in range(kw):
                        j0 = pl - v if pl - v > 0 else 0
                        j1 = W + pl - v if W + pl - v < Wo else Wo
                        acc = 0.0
                        for s in range(S):
                            for i in range(i0, i1):
                                yi = i + u - pt
                                for j in range(j0, j1):
                                    acc += gout[s, k, i, j] * x[s, c, yi, j + v - pl]
                        gw[k, c, u, v] = acc

    if not need_gx:
        return None, gw_arr, gb_arr

    gx_arr = np.zeros((S, C, H, W), dtype=np.float64)
    cdef double[:, :, :, ::1] gx = gx_arr
    with nogil:
        for s in range(S):
            for c in range(C):
                for k in range(K):
                    for u in range(kh):
                        i0 = pt - u if pt - u > 0 else 0
                        i1 = H + pt - u if H + pt - u < Ho else Ho
                        for v in range(kw):
                            wkv = w[k, c, u, v]
                            j0 = pl - v if pl - v > 0 else 0
                            j1 = W + pl - v if W + pl - v < Wo else Wo
                            for i in range(i0, i1):
                                yi = i + u - pt
                                for j in range(j0, j1):
                                    gx[s, c, yi, j + v - pl] += gout[s, k, i, j] * wkv
    return gx_arr, gw_arr, gb_arr


def maxpool2_forward(cnp.ndarray x_arr):
    cdef double[:, :, :, ::1] x = np.ascontiguousarray(x_arr)
    cdef Py_ssize_t S = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3]
    cdef Py_ssize_t Ho = (H + 1) // 2, Wo = (W + 1) // 2
    out_arr = np.empty((S, C, Ho, Wo), dtype=np.float64)
    idx_arr = np.empty((S, C, Ho, Wo), dtype=np.int64)
    cdef double[:, :, :, ::1] out = out_arr
    cdef long long[:, :, :, ::1] idx = idx_arr
    cdef Py_ssize_t s, c, i, j, u, v, y, z, best_y, best_z
    cdef double best, val

    with nogil:
        for s in range(S):
            for c in range(C):
                for i in range(Ho):
                    for j in range(Wo):
                        best = -1e308
                        best_y = 2 * i
                        best_z = 2 * j
                        for u in range(2):
                            y = 2 * i + u
                            if y >= H:
                                break
                            for v in range(2):
                                z = 2 * j + v
                                if z >= W:
                                    break
                                val = x[s, c, y, z]
                                if val > best:
                                    best = val
                                    best_y = y
                                    best_z = z
                        out[s, c, i, j] = best
                        idx[s, c, i, j] = best_y * W + best_z
    return out_arr, idx_arr


def maxpool2_backward(cnp.ndarray gout_arr, cnp.ndarray idx_arr,
                      Py_ssize_t H, Py_ssize_t W):
    cdef double[:, :, :, ::1] gout = np.ascontiguousarray(gout_arr)
    cdef long long[:, :, :, ::1] idx = np.ascontiguousarray(idx_arr)
    cdef Py_ssize_t S = gout.shape[0], C = gout.shape[1]
    cdef Py_ssize_t Ho = gout.shape[2], Wo = gout.shape[3]
    gx_arr = np.zeros((S, C, H, W), dtype=np.float64)
    cdef double[:, :, :, ::1] gx = gx_arr
    cdef Py_ssize_t s, c, i, j
    cdef long long f

    with nogil:
        for s in range(S):
            for c in range(C):
                for i in range(Ho):
                    for j in range(Wo):
                        f = idx[s, c, i, j]
                        gx[s, c, f // W, f % W] += gout[s, c, i, j]
    return gx_arr
