# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lag-search cross-correlation kernel.

Direct O(pairs * frames * lags * frame_len) evaluation of the maximum
normalized cross-correlation within a lag window; the hot loop of the
multi-microphone injection detector.
"""

from libc.math cimport sqrt

import numpy as np


def pairwise_max_ncc(double[:, :, ::1] frames, int max_lag):
    """frames: zero-mean (n_ch, n_frames, frame_len) float64, C-contiguous.

    Returns (n_ch, n_ch, n_frames); entries are in [-1, 1], 0 where either
    frame has zero norm, and the diagonal is exactly 1.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")

    cdef Py_ssize_t n_ch = frames.shape[0]
    cdef Py_ssize_t n_frames = frames.shape[1]
    cdef Py_ssize_t frame_len = frames.shape[2]
    cdef Py_ssize_t i, j, f, t, lag, width
    cdef double acc, rev, best, denom

    out_arr = np.ones((n_ch, n_ch, n_frames), dtype=np.float64)
    norms_arr = np.empty((n_ch, n_frames), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] norms = norms_arr

    with nogil:
        for i in range(n_ch):
            for f in range(n_frames):
                acc = 0.0
                for t in range(frame_len):
                    acc += frames[i, f, t] * frames[i, f, t]
                norms[i, f] = sqrt(acc)

        for i in range(n_ch):
            for j in range(i + 1, n_ch):
                for f in range(n_frames):
                    best = 0.0
                    for lag in range(max_lag + 1):
                        width = frame_len - lag
                        acc = 0.0
                        rev = 0.0
                        for t in range(width):
                            acc += frames[i, f, t] * frames[j, f, t + lag]
                            rev += frames[i, f, t + lag] * frames[j, f, t]
                        if lag == 0:
                            best = acc
                        else:
                            if acc > best:
                                best = acc
                            if rev > best:
                                best = rev
                    denom = norms[i, f] * norms[j, f]
                    if denom > 0.0:
                        best = best / denom
                    else:
                        best = 0.0
                    out[i, j, f] = best
                    out[j, i, f] = best
    return out_arr
