"""FFT-based evaluation of centered, offset discrete Fourier sums.

All transforms here compute sums of the form

    out[a] = sum_b v[b] * exp(sign * 2j*pi/K * (a - ca) * (b - cb))

for arbitrary real offsets ``ca`` and ``cb``, any input length and any number
of outputs.  Inputs longer than ``K`` are folded and outputs beyond ``K``
are continued using the quasi-periodicity of the kernel.
"""
from __future__ import annotations

import numpy as np


def offset_dft(v, K: int, ca: float, cb: float, n_out: int, sign: int = 1) -> np.ndarray:
    """Evaluate the offset Fourier sum along axis 0 of ``v``.

    Parameters
    ----------
    v : array_like, shape (B, ...)
        Input samples; trailing axes are batch axes.
    K : int
        Period of the kernel.
    ca, cb : float
        Output and input index offsets.
    n_out : int
        Number of output indices ``a = 0 .. n_out - 1``.
    sign : {+1, -1}
        Sign of the exponent.
    """
    v = np.asarray(v, dtype=complex)
    B = v.shape[0]
    tail = v.shape[1:]
    bshape = (-1,) + (1,) * len(tail)
    w = np.zeros((K,) + tail, dtype=complex)
    for q in range(-(-B // K)):
        chunk = v[q * K:(q + 1) * K]
        w[:chunk.shape[0]] += chunk * np.exp(-sign * 2j * np.pi * q * ca)
    b = np.arange(K)
    w *= np.exp(-sign * 2j * np.pi * ca * b / K).reshape(bshape)
    if sign > 0:
        core = np.fft.ifft(w, axis=0) * K
    else:
        core = np.fft.fft(w, axis=0)
    a = np.arange(n_out)
    q = a // K
    phase = np.exp(sign * 2j * np.pi * (ca * cb - (a % K) * cb) / K)
    phase = phase * np.exp(-sign * 2j * np.pi * q * cb)
    return core[a % K] * phase.reshape(bshape)


def centered_dft_apply(v, row_shift: float = 0.0, col_shift: float = 0.0,
                       inverse: bool = False) -> np.ndarray:
    """Apply the (shifted) centered DFT matrix, or its inverse, along axis 0.

    The forward matrix is ``exp(2j*pi/N (j - c + row_shift)(k - c + col_shift)) / sqrt(N)``
    with ``c = (N - 1) / 2``.
    """
    v = np.asarray(v, dtype=complex)
    N = v.shape[0]
    c = (N - 1) / 2
    if inverse:
        # conjugate transpose: rows and columns swap roles
        out = offset_dft(v, N, c - col_shift, c - row_shift, N, sign=-1)
    else:
        out = offset_dft(v, N, c - row_shift, c - col_shift, N, sign=1)
    return out / np.sqrt(N)
