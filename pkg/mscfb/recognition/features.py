import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from mscfb.exceptions import DataError, ReservedColumnError, SpecMismatchError
from mscfb.filterbank.bank import FilterBankSet
from mscfb.imaging.blocks import SubregionSample
from mscfb.recognition.classify import Gallery

FeatureVector = NDArray[np.float64]

REAL_FORMAT = "%.17g"
ID_COLUMNS = ("source_id", "label")


def _check_spec(sample: SubregionSample, banks: FilterBankSet) -> None:
    if sample.spec != banks.spec:
        raise SpecMismatchError(
            f"Sample '{sample.source_id}' uses {sample.spec} but the banks expect {banks.spec}"
        )


def extract_features(sample: SubregionSample, banks: FilterBankSet) -> FeatureVector:
    """f[c] = sum over m of h_{m,c}^T x_m, one component per class bank"""
    _check_spec(sample, banks)
    return banks.matrix @ sample.concatenated


def extract_features_blockwise(sample: SubregionSample, banks: FilterBankSet) -> FeatureVector:
    """Same features accumulated subregion by subregion, as the summed origin outputs"""
    _check_spec(sample, banks)
    filters = banks.matrix.reshape(len(banks), banks.spec.m, banks.spec.d)
    return np.einsum("cmd,md->c", filters, sample.blocks)


def extract_feature_matrix(
    samples: Sequence[SubregionSample], banks: FilterBankSet
) -> NDArray[np.float64]:
    """(n, C) features for a batch of samples"""
    if not samples:
        return np.empty((0, len(banks)))
    for sample in samples:
        _check_spec(sample, banks)
    data = np.vstack([sample.concatenated for sample in samples])
    return data @ banks.matrix.T


def build_gallery(samples: Sequence[SubregionSample], banks: FilterBankSet) -> Gallery:
    """Featurizes labelled samples into a nearest-neighbour gallery"""
    return Gallery(
        features=extract_feature_matrix(samples, banks),
        labels=tuple(sample.label for sample in samples),
        source_ids=tuple(sample.source_id for sample in samples),
    )


def features_frame(
    features: NDArray[np.float64],
    class_ids: Iterable[str],
    source_ids: Iterable[str],
    labels: Iterable[str | None],
) -> pd.DataFrame:
    class_ids = list(class_ids)
    if clashes := sorted(set(class_ids) & set(ID_COLUMNS)):
        raise ReservedColumnError(f"Class ids {clashes} collide with the feature file id columns")
    frame = pd.DataFrame(np.asarray(features, dtype=np.float64), columns=class_ids)
    frame.insert(0, "label", ["" if label is None else label for label in labels])
    frame.insert(0, "source_id", list(source_ids))
    return frame


def write_features_csv(
    samples: Sequence[SubregionSample], banks: FilterBankSet, path: str | Path
) -> str:
    """Writes one row per sample: source_id, label (or empty), then C components"""
    frame = features_frame(
        extract_feature_matrix(samples, banks),
        banks.class_ids,
        (sample.source_id for sample in samples),
        (sample.label for sample in samples),
    )
    frame.to_csv(path, index=False, float_format=REAL_FORMAT)
    logging.info(f"Wrote {len(frame)} feature vectors of length {len(banks)} to {path}")
    return str(path)


def read_features_csv(path: str | Path) -> Gallery:
    """Reads a feature CSV back as a Gallery; empty labels become None"""
    frame = pd.read_csv(
        path,
        dtype={"source_id": str, "label": str},
        keep_default_na=False,
        na_filter=False,
        float_precision="round_trip",
    )
    if tuple(frame.columns[:2]) != ID_COLUMNS:
        raise DataError(f"{path} is not a feature file: columns are {list(frame.columns[:2])}")

    values = frame.iloc[:, 2:].to_numpy(dtype=np.float64)
    return Gallery(
        features=values,
        labels=tuple(label if label else None for label in frame["label"]),
        source_ids=tuple(frame["source_id"]),
    )
