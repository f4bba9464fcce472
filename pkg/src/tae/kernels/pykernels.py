"""Pure-numpy kernels: stride-1 cross-correlation, 2x2 max-pool, 2x nearest
up-sample.

Convolution uses sliding_window_view + tensordot so the heavy lifting lands in
BLAS. The compiled backend in `_cykernels` implements the same contracts with
direct C loops; `tae.kernels` picks one at import time.

Shapes follow the NCHW convention. All arrays are float64 and C-contiguous.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def conv_pads(kh: int, kw: int, padding: str):
    """(top, bottom, left, right) zero-padding for a stride-1 convolution."""
    if padding == "same":
        pt = (kh - 1) // 2
        pl = (kw - 1) // 2
        return pt, kh - 1 - pt, pl, kw - 1 - pl
    if padding == "valid":
        return 0, 0, 0, 0
    raise ValueError(f"unknown padding mode {padding!r} (expected 'same' or 'valid')")


def conv2d_forward(x, w, b, padding="same"):
    S, C, H, W = x.shape
    K, _, kh, kw = w.shape
    pt, pb, pl, pr = conv_pads(kh, kw, padding)
    xp = np.pad(x, ((0, 0), (0, 0), (pt, pb), (pl, pr))) if pt + pb + pl + pr else x
    win = sliding_window_view(xp, (kh, kw), axis=(2, 3))  # S,C,Ho,Wo,kh,kw
    out = np.tensordot(win, w, axes=([1, 4, 5], [1, 2, 3]))  # S,Ho,Wo,K
    out = np.ascontiguousarray(out.transpose(0, 3, 1, 2))
    out += b[None, :, None, None]
    return out


def conv2d_backward(x, w, gout, padding="same", need_gx=True):
    """Gradients of conv2d_forward; returns (gx, gw, gb), gx None if skipped."""
    S, C, H, W = x.shape
    K, _, kh, kw = w.shape
    pt, pb, pl, pr = conv_pads(kh, kw, padding)
    xp = np.pad(x, ((0, 0), (0, 0), (pt, pb), (pl, pr))) if pt + pb + pl + pr else x

    gb = gout.sum(axis=(0, 2, 3))
    win = sliding_window_view(xp, (kh, kw), axis=(2, 3))
    # gw[k,c,u,v] = sum_{s,i,j} gout[s,k,i,j] * xp[s,c,i+u,j+v]
    gw = np.tensordot(gout, win, axes=([0, 2, 3], [0, 2, 3]))

    gx = None
    if need_gx:
        # full correlation of gout with the flipped kernel, then crop padding
        gp = np.pad(gout, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
        wf = w[:, :, ::-1, ::-1]
        gwin = sliding_window_view(gp, (kh, kw), axis=(2, 3))  # S,K,Hp,Wp,kh,kw
        gxp = np.tensordot(gwin, wf, axes=([1, 4, 5], [0, 2, 3]))  # S,Hp,Wp,C
        gxp = gxp.transpose(0, 3, 1, 2)
        gx = np.ascontiguousarray(gxp[:, :, pt:pt + H, pl:pl + W])
    return gx, gw, gb


def maxpool2_forward(x):
    """2x2/stride-2 max pool. Odd sides are padded with -inf on bottom/right.

    Returns (out, idx) where idx holds, per output cell, the flat row-major
    index into the input H*W plane of the winning cell (first max wins ties).
    """
    S, C, H, W = x.shape
    Ho, Wo = (H + 1) // 2, (W + 1) // 2
    if H % 2 or W % 2:
        x = np.pad(x, ((0, 0), (0, 0), (0, H % 2), (0, W % 2)),
                   constant_values=-np.inf)
    blocks = x.reshape(S, C, Ho, 2, Wo, 2).transpose(0, 1, 2, 4, 3, 5)
    blocks = np.ascontiguousarray(blocks).reshape(S, C, Ho, Wo, 4)
    amax = blocks.argmax(axis=-1)  # first max in row-major window order
    out = np.take_along_axis(blocks, amax[..., None], axis=-1)[..., 0]
    oh = np.arange(Ho)[:, None]
    ow = np.arange(Wo)[None, :]
    rows = oh * 2 + amax // 2
    cols = ow * 2 + amax % 2
    idx = rows * W + cols
    return out, idx.astype(np.int64)


def maxpool2_backward(gout, idx, H, W):
    """Routes each output gradient to its argmax input cell."""
    S, C = gout.shape[:2]
    gx = np.zeros((S, C, H * W))
    np.put_along_axis(
        gx.reshape(S * C, H * W),
        idx.reshape(S * C, -1),
        gout.reshape(S * C, -1),
        axis=1,
    )
    return gx.reshape(S, C, H, W)


def upsample2_forward(x):
    return x.repeat(2, axis=2).repeat(2, axis=3)


def upsample2_backward(gout):
    S, C, H2, W2 = gout.shape
    return gout.reshape(S, C, H2 // 2, 2, W2 // 2, 2).sum(axis=(3, 5))
