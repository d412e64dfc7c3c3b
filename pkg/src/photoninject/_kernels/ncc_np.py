"""numpy fallback for the lag-search cross-correlation kernel.

Computes the same quantity as the compiled kernel via FFT correlation:
for every channel pair and frame, the maximum over lags in
[-max_lag, max_lag] of the zero-padded cross-correlation, normalized by
the product of the full-frame norms.
"""

from __future__ import annotations

import numpy as np


def pairwise_max_ncc(frames: np.ndarray, max_lag: int) -> np.ndarray:
    """frames: zero-mean (n_ch, n_frames, frame_len) float64.

    Returns (n_ch, n_ch, n_frames); entries are in [-1, 1], 0 where either
    frame has zero norm, and the diagonal is exactly 1.
    """
    frames = np.ascontiguousarray(frames, dtype=np.float64)
    n_ch, n_frames, frame_len = frames.shape
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")

    nfft = 1
    while nfft < frame_len + max_lag:
        nfft <<= 1
    spectra = np.fft.rfft(frames, nfft, axis=-1)
    norms = np.linalg.norm(frames, axis=-1)

    # cc[i, j, f, l] = sum_t frames[i, f, t] * frames[j, f, t + l]
    cross = np.conj(spectra)[:, None] * spectra[None, :]
    cc = np.fft.irfft(cross, nfft, axis=-1)
    best = cc[..., :max_lag + 1].max(axis=-1)
    if max_lag > 0:
        best = np.maximum(best, cc[..., nfft - max_lag:].max(axis=-1))

    denom = norms[:, None, :] * norms[None, :, :]
    out = np.divide(best, denom, out=np.zeros_like(best), where=denom > 0)
    idx = np.arange(n_ch)
    out[idx, idx, :] = 1.0
    return out
