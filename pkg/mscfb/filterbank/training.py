import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal

import dask
import numpy as np
from numpy.typing import ArrayLike, NDArray

from mscfb.exceptions import (
    AlphaOutOfRangeError,
    DataError,
    EmptyClassError,
    MsCfbError,
    NoImpostorsError,
    NumericalError,
    SolverFailureError,
    SpecMismatchError,
    UnknownClassError,
    ZeroVectorError,
)
from mscfb.filterbank.bank import CorrelationFilterBank, FilterBankSet
from mscfb.imaging.blocks import BlockSpec, SubregionSample
from mscfb.numerics.linalg import (
    as_matrix,
    as_vector,
    check_symmetric,
    cholesky_solve,
    woodbury_solve,
)

DEFAULT_ALPHA = 0.6
RESIDUAL_TOLERANCE = 1e-8

SolvePath = Literal["dense", "woodbury", "auto"]


@dataclass(frozen=True, eq=False)
class TrainingView:
    """Labelled training samples stacked as an (N, MD) matrix.

    Row i is the concatenation (x_1; ...; x_M) of sample i. ``class_ids`` fixes the class
    order of everything trained from this view.
    """

    data: NDArray[np.float64]
    labels: tuple[str, ...]
    class_ids: tuple[str, ...]
    spec: BlockSpec

    def __post_init__(self):
        data = as_matrix(self.data, "training data")
        if data.shape[1] != self.spec.md:
            raise SpecMismatchError(
                f"Training rows have length {data.shape[1]}, block spec needs {self.spec.md}"
            )
        labels = tuple(self.labels)
        class_ids = tuple(self.class_ids)
        if len(labels) != data.shape[0]:
            raise DataError(f"{len(labels)} labels for {data.shape[0]} training samples")
        if len(set(class_ids)) != len(class_ids):
            raise DataError("Class identifiers must be distinct")
        unknown = set(labels) - set(class_ids)
        if unknown:
            raise UnknownClassError(f"Labels without a class: {sorted(unknown)}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_ids", class_ids)

    @classmethod
    def from_samples(
        cls, samples: Iterable[SubregionSample], class_ids: Iterable[str] | None = None
    ) -> "TrainingView":
        """Stacks labelled samples; classes default to first-seen label order"""
        samples = list(samples)
        if not samples:
            raise EmptyClassError("No training samples")
        spec = samples[0].spec
        for sample in samples:
            if sample.spec != spec:
                raise SpecMismatchError(
                    f"Sample '{sample.source_id}' uses {sample.spec}, not {spec}"
                )
            if sample.label is None:
                raise DataError(f"Training sample '{sample.source_id}' has no label")

        labels = tuple(sample.label for sample in samples)
        if class_ids is None:
            class_ids = tuple(dict.fromkeys(labels))
        data = np.vstack([sample.concatenated for sample in samples])

        return cls(data, labels, tuple(class_ids), spec)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @cached_property
    def _label_array(self) -> NDArray[np.object_]:
        return np.asarray(self.labels, dtype=object)

    def _check_class(self, class_id: str) -> None:
        if class_id not in self.class_ids:
            raise UnknownClassError(f"Unknown class '{class_id}'")

    def count(self, class_id: str) -> int:
        """N_c, the number of authentic samples"""
        self._check_class(class_id)
        return int(np.count_nonzero(self._label_array == class_id))

    def impostor_count(self, class_id: str) -> int:
        """N_c^I = N - N_c"""
        return self.n - self.count(class_id)

    def authentic_matrix(self, class_id: str) -> NDArray[np.float64]:
        """(N_c, MD) rows of the class"""
        self._check_class(class_id)
        return self.data[self._label_array == class_id]

    def impostor_matrix(self, class_id: str) -> NDArray[np.float64]:
        """(MD, N_c^I) matrix F whose columns are the impostor concatenations"""
        self._check_class(class_id)
        impostors = self.data[self._label_array != class_id]
        if impostors.shape[0] == 0:
            raise NoImpostorsError(f"Class '{class_id}' has no impostor samples")
        return np.ascontiguousarray(impostors.T)


@dataclass(frozen=True, eq=False)
class DesignIntermediates:
    sigma: NDArray[np.float64]
    sigma_hat: NDArray[np.float64]
    mean: NDArray[np.float64]
    alpha: float


def check_alpha(alpha: float, allow_zero: bool = False) -> None:
    lower_ok = alpha >= 0 if allow_zero else alpha > 0
    if not (lower_ok and alpha <= 1):
        interval = "[0, 1]" if allow_zero else "(0, 1]"
        raise AlphaOutOfRangeError(f"alpha must lie in {interval}, got {alpha}")


def class_mean(view: TrainingView, class_id: str) -> NDArray[np.float64]:
    """m_c = (D / N_c) * sum of the authentic concatenations"""
    authentic = view.authentic_matrix(class_id)
    if authentic.shape[0] == 0:
        raise EmptyClassError(f"Class '{class_id}' has no training samples")
    return view.spec.d * authentic.sum(axis=0) / authentic.shape[0]


def _covariance(impostors: NDArray[np.float64], d: int) -> NDArray[np.float64]:
    return (d**2 / impostors.shape[1]) * (impostors @ impostors.T)


def impostor_covariance(view: TrainingView, class_id: str) -> NDArray[np.float64]:
    """Sigma_c = (D^2 / N_c^I) * sum_i X_i X_i^T over the impostor concatenations"""
    return _covariance(view.impostor_matrix(class_id), view.spec.d)


def regularize(sigma: ArrayLike, alpha: float) -> NDArray[np.float64]:
    """(1 - alpha) * sigma + alpha * I"""
    check_alpha(alpha, allow_zero=True)
    sigma = as_matrix(sigma, "sigma")
    check_symmetric(sigma)
    return (1 - alpha) * sigma + alpha * np.eye(sigma.shape[0])


def design_intermediates(
    view: TrainingView, class_id: str, alpha: float = DEFAULT_ALPHA
) -> DesignIntermediates:
    """Dense Sigma_c, regularized Sigma_c and m_c for one class"""
    sigma = impostor_covariance(view, class_id)
    return DesignIntermediates(
        sigma=sigma,
        sigma_hat=regularize(sigma, alpha),
        mean=class_mean(view, class_id),
        alpha=alpha,
    )


def backward_error_bound(
    alpha: float, beta: float, impostors: NDArray[np.float64], g: NDArray[np.float64]
) -> float:
    """Residual norm a backward-stable solve of order MD may leave: MD.eps.||Sigma_hat||.||g||

    alpha + beta ||F||_F^2 stands in for ||Sigma_hat||_2, which it bounds from above.
    """
    md = impostors.shape[0]
    norm = alpha + beta * float(np.sum(impostors**2))
    return md * float(np.finfo(np.float64).eps) * norm * float(np.linalg.norm(g))


def choose_path(path: SolvePath, impostor_count: int, md: int) -> str:
    """Resolves ``auto`` to woodbury when N_c^I < MD / 4, dense otherwise"""
    if path == "auto":
        return "woodbury" if 4 * impostor_count < md else "dense"
    if path not in ("dense", "woodbury"):
        raise ValueError(f"Unknown solve path: {path}")
    return path


def design_bank(
    view: TrainingView, class_id: str, alpha: float = DEFAULT_ALPHA, path: SolvePath = "auto"
) -> CorrelationFilterBank:
    """Designs the class's correlation filter bank g_c solving Sigma_hat_c g_c = m_c"""
    check_alpha(alpha)
    mean = class_mean(view, class_id)
    impostors = view.impostor_matrix(class_id)
    d = view.spec.d

    # Sigma_hat = alpha I + beta F F^T
    beta = (1 - alpha) * d**2 / impostors.shape[1]

    if alpha == 1:
        return CorrelationFilterBank(class_id, mean.copy(), view.spec)

    chosen = choose_path(path, impostors.shape[1], view.spec.md)
    try:
        if chosen == "woodbury":
            g = woodbury_solve(alpha, beta, impostors, mean)
        else:
            g = cholesky_solve(regularize(_covariance(impostors, d), alpha), mean)
    except NumericalError as err:
        raise SolverFailureError(f"Could not solve for class '{class_id}': {err}") from err

    if not np.all(np.isfinite(g)):
        raise SolverFailureError(f"Solution for class '{class_id}' is not finite")

    residual = alpha * g + beta * (impostors @ (impostors.T @ g)) - mean
    residual_norm = float(np.linalg.norm(residual))
    relative = residual_norm / max(float(np.linalg.norm(mean)), np.finfo(float).tiny)
    bound = backward_error_bound(alpha, beta, impostors, g)
    logging.debug(
        f"Class {class_id}: {chosen} solve, relative residual {relative:.3e}, "
        f"backward error bound {bound:.3e}"
    )
    # warn past both the relative tolerance and the stable-solve bound
    if relative > RESIDUAL_TOLERANCE and residual_norm > bound:
        logging.warning(
            f"Class {class_id}: residual {residual_norm:.3e} exceeds the backward error bound "
            f"{bound:.3e} of a stable {chosen} solve"
        )

    return CorrelationFilterBank(class_id, g, view.spec)


def _design_tagged(view: TrainingView, class_id: str, alpha: float, path: SolvePath):
    try:
        return design_bank(view, class_id, alpha, path)
    except MsCfbError as err:
        err.add_note(f"while designing the bank for class '{class_id}'")
        raise


def train_all(
    view: TrainingView,
    alpha: float = DEFAULT_ALPHA,
    path: SolvePath = "auto",
    workers: int = 1,
) -> FilterBankSet:
    """Designs one bank per class, returned in ``view.class_ids`` order"""
    check_alpha(alpha)
    if len(view.class_ids) < 2:
        raise NoImpostorsError(
            f"Training needs at least two classes, got {len(view.class_ids)}"
        )

    if workers > 1:
        # one shared graph node for the view, not a rebuilt copy per task
        shared = dask.delayed(view, traverse=False)
        tasks = [dask.delayed(_design_tagged)(shared, c, alpha, path) for c in view.class_ids]
        banks = dask.compute(*tasks, scheduler="threads", num_workers=workers)
    else:
        banks = [_design_tagged(view, c, alpha, path) for c in view.class_ids]

    logging.info(
        f"Designed {len(banks)} filter banks of length {view.spec.md} from {view.n} samples"
    )
    return FilterBankSet(tuple(banks), alpha, view.spec)


def rayleigh_quotient(g: ArrayLike, inter: DesignIntermediates) -> float:
    """|m^T g|^2 / (g^T Sigma_hat g)"""
    g = as_vector(g, "g")
    if not np.any(g):
        raise ZeroVectorError("The Rayleigh quotient is undefined for a zero vector")
    numerator = float(inter.mean @ g) ** 2
    denominator = float(g @ (inter.sigma_hat @ g))
    return numerator / denominator
