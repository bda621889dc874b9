"""3-D FFT shim: torch's CPU FFT when importable (several times faster), numpy otherwise.

Set ``VORTEXLIFT_FFT=numpy`` to force the numpy backend.
"""

import os

import numpy as np

_torch = None
if os.environ.get("VORTEXLIFT_FFT", "auto").lower() != "numpy":
    try:
        import torch as _torch
    except ImportError:  # pragma: no cover - depends on environment
        _torch = None

BACKEND = "torch" if _torch is not None else "numpy"


def fftn(a):
    if _torch is not None:
        return _torch.fft.fftn(_torch.from_numpy(np.ascontiguousarray(a))).numpy()
    return np.fft.fftn(a)


def ifftn(a):
    if _torch is not None:
        return _torch.fft.ifftn(_torch.from_numpy(np.ascontiguousarray(a))).numpy()
    return np.fft.ifftn(a)
