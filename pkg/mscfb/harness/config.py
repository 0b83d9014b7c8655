from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from mscfb.filterbank.training import DEFAULT_ALPHA
from mscfb.imaging.blocks import DEFAULT_BLOCK_HEIGHT, DEFAULT_BLOCK_WIDTH, BlockSpec
from mscfb.utils import MAX_SEED

DEFAULT_T = 3
DEFAULT_TRIALS = 20


class ExperimentConfig(BaseModel):
    """Parameters of one evaluation run; defaults follow the published setting"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    block_width: int = Field(DEFAULT_BLOCK_WIDTH, ge=1)
    block_height: int = Field(DEFAULT_BLOCK_HEIGHT, ge=1)
    alpha: float = Field(DEFAULT_ALPHA, gt=0, le=1)
    t: int = Field(DEFAULT_T, ge=1)
    trials: int = Field(DEFAULT_TRIALS, ge=1)
    seed: int = Field(0, ge=0, le=MAX_SEED)
    classifier: Literal["max", "cosine"] = "cosine"
    solve_path: Literal["dense", "woodbury", "auto"] = "auto"
    # left out of reports so results do not depend on the worker count
    workers: int = Field(1, ge=1, exclude=True)

    def block_spec(self, image_width: int, image_height: int) -> BlockSpec:
        return BlockSpec(self.block_width, self.block_height, image_width, image_height)
