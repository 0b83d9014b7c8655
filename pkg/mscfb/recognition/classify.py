from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from mscfb.exceptions import DimensionMismatchError, EmptyGalleryError, ZeroVectorError
from mscfb.numerics.linalg import as_vector

MIN_NORM = 1e-300


@dataclass(frozen=True, eq=False)
class Gallery:
    """Reference feature vectors (one row each) with their labels and source ids"""

    features: NDArray[np.float64]
    labels: tuple[str | None, ...]
    source_ids: tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DimensionMismatchError(f"Gallery features must be 2-D, got {features.shape}")
        labels = tuple(self.labels)
        source_ids = tuple(self.source_ids)
        if not len(labels) == len(source_ids) == features.shape[0]:
            raise DimensionMismatchError(
                f"{features.shape[0]} feature rows, {len(labels)} labels, "
                f"{len(source_ids)} source ids"
            )
        features.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "source_ids", source_ids)

    def __len__(self) -> int:
        return self.features.shape[0]


def classify_max(f: ArrayLike) -> int:
    """0-based index of the largest component; ties go to the lowest index.

    Only meaningful when the classes of the feature vector are the candidate classes, so not
    for galleries of subjects unseen during training.
    """
    return int(np.argmax(as_vector(f, "feature vector")))


def _norm(y: NDArray[np.float64], name: str) -> float:
    norm = float(np.linalg.norm(y))
    if not norm > MIN_NORM:
        raise ZeroVectorError(f"{name} has zero norm")
    return norm


def cosine_similarity(y1: ArrayLike, y2: ArrayLike) -> float:
    """y1^T y2 / (||y1|| ||y2||)"""
    y1 = as_vector(y1, "y1")
    y2 = as_vector(y2, "y2")
    if y1.shape != y2.shape:
        raise DimensionMismatchError(f"Lengths differ: {y1.size} != {y2.size}")
    return float(y1 @ y2) / (_norm(y1, "y1") * _norm(y2, "y2"))


def cosine_scores(probe: ArrayLike, gallery: Gallery) -> NDArray[np.float64]:
    """Cosine similarity of ``probe`` against every gallery entry, in gallery order"""
    if len(gallery) == 0:
        raise EmptyGalleryError("The gallery is empty")
    probe = as_vector(probe, "probe")
    if probe.size != gallery.features.shape[1]:
        raise DimensionMismatchError(
            f"Probe has {probe.size} components, gallery entries have {gallery.features.shape[1]}"
        )
    probe_norm = _norm(probe, "probe")
    norms = np.linalg.norm(gallery.features, axis=1)
    if np.any(norms <= MIN_NORM):
        zero = int(np.flatnonzero(norms <= MIN_NORM)[0])
        raise ZeroVectorError(f"Gallery entry '{gallery.source_ids[zero]}' has zero norm")

    return (gallery.features @ probe) / (norms * probe_norm)


def classify_cosine_nn(probe: ArrayLike, gallery: Gallery) -> tuple[str | None, float]:
    """Label and similarity of the most cosine-similar gallery entry; earliest entry wins ties"""
    scores = cosine_scores(probe, gallery)
    best = int(np.argmax(scores))
    return gallery.labels[best], float(scores[best])
