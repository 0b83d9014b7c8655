from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from mscfb.exceptions import DimensionMismatchError, SpecMismatchError, UnknownClassError
from mscfb.imaging.blocks import BlockSpec


@dataclass(frozen=True, eq=False)
class CorrelationFilterBank:
    """One class's M subregion filters stacked into g = (h_1; h_2; ...; h_M)"""

    class_id: str
    g: NDArray[np.float64]
    spec: BlockSpec

    def __post_init__(self):
        g = np.asarray(self.g, dtype=np.float64)
        if g.shape != (self.spec.md,):
            raise DimensionMismatchError(
                f"Bank for class '{self.class_id}' must have length {self.spec.md}, got {g.shape}"
            )
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def filters(self) -> NDArray[np.float64]:
        """(M, D) view; row m is the filter for subregion m"""
        return self.g.reshape(self.spec.m, self.spec.d)

    def filter(self, m: int) -> NDArray[np.float64]:
        """Filter h_m for the m-th subregion, 0-based, in row-major block order"""
        if not 0 <= m < self.spec.m:
            raise IndexError(f"Subregion index {m} outside 0..{self.spec.m - 1}")
        return self.g[m * self.spec.d : (m + 1) * self.spec.d]


@dataclass(frozen=True, eq=False)
class FilterBankSet:
    """All class banks, in training class order"""

    banks: tuple[CorrelationFilterBank, ...]
    alpha: float
    spec: BlockSpec

    def __post_init__(self):
        object.__setattr__(self, "banks", tuple(self.banks))
        if not self.banks:
            raise DimensionMismatchError("A filter bank set needs at least one bank")
        for bank in self.banks:
            if bank.spec != self.spec:
                raise SpecMismatchError(
                    f"Bank for class '{bank.class_id}' uses {bank.spec}, expected {self.spec}"
                )
        if len(set(self.class_ids)) != len(self.banks):
            raise DimensionMismatchError("Each class may have exactly one bank")

    def __len__(self) -> int:
        return len(self.banks)

    @property
    def class_ids(self) -> tuple[str, ...]:
        return tuple(bank.class_id for bank in self.banks)

    @cached_property
    def matrix(self) -> NDArray[np.float64]:
        """(C, MD) array whose rows are the banks g_c"""
        matrix = np.vstack([bank.g for bank in self.banks])
        matrix.setflags(write=False)
        return matrix

    def bank(self, class_id: str) -> CorrelationFilterBank:
        for bank in self.banks:
            if bank.class_id == class_id:
                return bank
        raise UnknownClassError(f"No bank for class '{class_id}'")
