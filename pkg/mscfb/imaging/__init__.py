from .blocks import BlockSpec, SubregionSample, partition, preprocess  # noqa: F401
from .equalize import equalization_lut, equalize_histogram  # noqa: F401
from .pgm import GrayImage, encode_pgm, load_pgm, read_pgm, save_pgm  # noqa: F401
