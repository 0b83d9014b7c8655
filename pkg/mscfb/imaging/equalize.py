import numpy as np

from mscfb.imaging.pgm import GrayImage

LEVELS = 256


def equalization_lut(img: GrayImage) -> np.ndarray | None:
    """Returns the 256-entry intensity map for ``img``, or None for a single-intensity image.

    map(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255), rounding half up. The map is
    evaluated in integer arithmetic so every implementation lands on the same bytes.
    """
    histogram = np.bincount(img.pixels.ravel(), minlength=LEVELS).astype(np.int64)
    cdf = np.cumsum(histogram)
    total = int(cdf[-1])
    cdf_min = int(cdf[np.flatnonzero(histogram)[0]])
    if cdf_min == total:
        return None

    denominator = total - cdf_min
    lut = (2 * 255 * (cdf - cdf_min) + denominator) // (2 * denominator)

    # intensities below the darkest present one are never looked up
    return np.clip(lut, 0, 255).astype(np.uint8)


def equalize_histogram(img: GrayImage) -> GrayImage:
    """Histogram-equalizes an 8-bit image; constant images are returned unchanged"""
    lut = equalization_lut(img)
    if lut is None:
        return img
    return GrayImage(lut[img.pixels])
