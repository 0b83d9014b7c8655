import numpy as np
from numpy.typing import ArrayLike

from mscfb.exceptions import DimensionMismatchError
from mscfb.numerics.linalg import as_vector


def dft_origin_correlation(x: ArrayLike, h: ArrayLike) -> float:
    """Origin (zero-shift) correlation of x and h evaluated in the frequency domain.

    Uses the unnormalized forward transform, so the result is D times the spatial inner
    product. The period of the transform is taken as D, the vector length.
    """
    x = as_vector(x, "x")
    h = as_vector(h, "h")
    if x.shape != h.shape:
        raise DimensionMismatchError(f"Lengths differ: {x.size} != {h.size}")

    spectrum_x = np.fft.fft(x)
    spectrum_h = np.fft.fft(h)

    return float(np.sum(np.conj(spectrum_x) * spectrum_h).real)
