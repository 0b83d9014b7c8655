from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from mscfb.exceptions import (
    DimensionMismatchError,
    InvalidGeometryError,
    NonDivisibleGeometryError,
)
from mscfb.imaging.equalize import equalize_histogram
from mscfb.imaging.pgm import GrayImage

# published face geometry: 80x88 crops split into 16x11 subregions
DEFAULT_IMAGE_WIDTH = 80
DEFAULT_IMAGE_HEIGHT = 88
DEFAULT_BLOCK_WIDTH = 16
DEFAULT_BLOCK_HEIGHT = 11


@dataclass(frozen=True)
class BlockSpec:
    """Geometry of the block grid laid over every image"""

    block_width: int = DEFAULT_BLOCK_WIDTH
    block_height: int = DEFAULT_BLOCK_HEIGHT
    image_width: int = DEFAULT_IMAGE_WIDTH
    image_height: int = DEFAULT_IMAGE_HEIGHT

    def __post_init__(self):
        sides = (self.block_width, self.block_height, self.image_width, self.image_height)
        if any(int(side) != side or side < 1 for side in sides):
            raise InvalidGeometryError(f"Block and image sides must be positive integers: {self}")
        if self.image_width % self.block_width or self.image_height % self.block_height:
            raise NonDivisibleGeometryError(
                f"A {self.image_width}x{self.image_height} image does not divide into "
                f"{self.block_width}x{self.block_height} blocks"
            )

    @classmethod
    def for_image(cls, img: GrayImage, block_width: int, block_height: int) -> "BlockSpec":
        return cls(block_width, block_height, img.width, img.height)

    @property
    def grid_columns(self) -> int:
        return self.image_width // self.block_width

    @property
    def grid_rows(self) -> int:
        return self.image_height // self.block_height

    @property
    def m(self) -> int:
        """Number of subregions M"""
        return self.grid_rows * self.grid_columns

    @property
    def d(self) -> int:
        """Length D of one vectorized subregion"""
        return self.block_width * self.block_height

    @property
    def md(self) -> int:
        return self.m * self.d


@dataclass(frozen=True, eq=False)
class SubregionSample:
    """The M vectorized blocks of one image, stored as an (M, D) float64 array"""

    blocks: NDArray[np.float64]
    spec: BlockSpec
    label: str | None = None
    source_id: str = ""

    def __post_init__(self):
        blocks = np.asarray(self.blocks, dtype=np.float64)
        if blocks.shape != (self.spec.m, self.spec.d):
            raise DimensionMismatchError(
                f"Expected {self.spec.m} blocks of length {self.spec.d}, got shape {blocks.shape}"
            )
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def concatenated(self) -> NDArray[np.float64]:
        """The MD-long stacking (x_1; x_2; ...; x_M)"""
        return self.blocks.reshape(-1)

    def with_label(self, label: str | None) -> "SubregionSample":
        return SubregionSample(self.blocks, self.spec, label, self.source_id)


def partition(
    img: GrayImage, spec: BlockSpec, label: str | None = None, source_id: str = ""
) -> SubregionSample:
    """Splits ``img`` into its block grid; blocks and pixels within them are row-major"""
    if (img.width, img.height) != (spec.image_width, spec.image_height):
        raise DimensionMismatchError(
            f"Image is {img.width}x{img.height} but block spec expects "
            f"{spec.image_width}x{spec.image_height}"
        )

    grid = img.pixels.reshape(
        spec.grid_rows, spec.block_height, spec.grid_columns, spec.block_width
    )
    blocks = grid.transpose(0, 2, 1, 3).reshape(spec.m, spec.d)

    return SubregionSample(blocks.astype(np.float64), spec, label, source_id)


def preprocess(
    img: GrayImage, spec: BlockSpec, label: str | None = None, source_id: str = ""
) -> SubregionSample:
    """Histogram equalization followed by block partition"""
    return partition(equalize_histogram(img), spec, label, source_id)
