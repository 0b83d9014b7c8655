import logging
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mscfb.exceptions import DataError, IoFailureError
from mscfb.harness.config import ExperimentConfig

REAL_FORMAT = "%.17g"
CONSISTENCY_TOLERANCE = 1e-12
TIMING_FIELDS = ("wall_seconds", "train_seconds", "test_seconds")
CONFIG_FIELDS = tuple(
    name for name, field in ExperimentConfig.model_fields.items() if not field.exclude
)

ReportFormat = Literal["json", "csv"]


class ExperimentReport(BaseModel):
    """Accuracies of the repeated random-split protocol with full provenance"""

    model_config = ConfigDict(frozen=True)

    accuracies: list[float]
    mean: float
    std: float
    config: ExperimentConfig
    trial_seeds: list[int]
    n_classes: int
    n_train: list[int]
    n_test: list[int]
    wall_seconds: float = 0.0
    train_seconds: float = 0.0
    test_seconds: float = 0.0

    @model_validator(mode="after")
    def check_consistency(self):
        trials = len(self.accuracies)
        if not trials:
            raise ValueError("A report needs at least one trial")
        if not len(self.trial_seeds) == len(self.n_train) == len(self.n_test) == trials:
            raise ValueError("Per-trial fields must all have one value per trial")
        if any(not 0 <= a <= 1 for a in self.accuracies):
            raise ValueError("Accuracies must lie in [0, 1]")
        if abs(self.mean - float(np.mean(self.accuracies))) > CONSISTENCY_TOLERANCE:
            raise ValueError(f"mean {self.mean} does not match the accuracies")
        if abs(self.std - float(np.std(self.accuracies))) > CONSISTENCY_TOLERANCE:
            raise ValueError(f"std {self.std} does not match the accuracies")
        return self

    @classmethod
    def from_trials(cls, accuracies: list[float], **fields) -> "ExperimentReport":
        """Builds a report, computing the mean and population standard deviation"""
        return cls(
            accuracies=accuracies,
            mean=float(np.mean(accuracies)),
            std=float(np.std(accuracies)),
            **fields,
        )

    def to_frame(self, include_timing: bool = True) -> pd.DataFrame:
        rows = []
        config = self.config.model_dump()
        for trial, accuracy in enumerate(self.accuracies):
            row = {
                "trial": trial,
                "trial_seed": self.trial_seeds[trial],
                "accuracy": accuracy,
                "n_train": self.n_train[trial],
                "n_test": self.n_test[trial],
                "mean": self.mean,
                "std": self.std,
                "n_classes": self.n_classes,
                **config,
            }
            if include_timing:
                row.update({field: getattr(self, field) for field in TIMING_FIELDS})
            rows.append(row)
        return pd.DataFrame(rows)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "ExperimentReport":
        first = frame.iloc[0]
        return cls(
            accuracies=[float(a) for a in frame["accuracy"]],
            mean=float(first["mean"]),
            std=float(first["std"]),
            config=_config_from_row(first),
            trial_seeds=[int(s) for s in frame["trial_seed"]],
            n_classes=int(first["n_classes"]),
            n_train=[int(n) for n in frame["n_train"]],
            n_test=[int(n) for n in frame["n_test"]],
            **_timing_from_row(first),
        )


class GalleryProbeReport(BaseModel):
    """Rank-1 accuracy of each probe set against one gallery"""

    model_config = ConfigDict(frozen=True)

    accuracies: dict[str, float]
    n_probes: dict[str, int]
    n_gallery: int
    n_train: int
    n_classes: int
    config: ExperimentConfig
    wall_seconds: float = 0.0
    train_seconds: float = 0.0
    test_seconds: float = 0.0

    @model_validator(mode="after")
    def check_consistency(self):
        if set(self.accuracies) != set(self.n_probes):
            raise ValueError("Every probe set needs an accuracy and a probe count")
        if any(not 0 <= a <= 1 for a in self.accuracies.values()):
            raise ValueError("Accuracies must lie in [0, 1]")
        return self

    def to_frame(self, include_timing: bool = True) -> pd.DataFrame:
        rows = []
        config = self.config.model_dump()
        for name, accuracy in self.accuracies.items():
            row = {
                "probe_set": name,
                "accuracy": accuracy,
                "n_probes": self.n_probes[name],
                "n_gallery": self.n_gallery,
                "n_train": self.n_train,
                "n_classes": self.n_classes,
                **config,
            }
            if include_timing:
                row.update({field: getattr(self, field) for field in TIMING_FIELDS})
            rows.append(row)
        return pd.DataFrame(rows)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "GalleryProbeReport":
        first = frame.iloc[0]
        names = [str(name) for name in frame["probe_set"]]
        return cls(
            accuracies=dict(zip(names, (float(a) for a in frame["accuracy"]), strict=True)),
            n_probes=dict(zip(names, (int(n) for n in frame["n_probes"]), strict=True)),
            n_gallery=int(first["n_gallery"]),
            n_train=int(first["n_train"]),
            n_classes=int(first["n_classes"]),
            config=_config_from_row(first),
            **_timing_from_row(first),
        )


Report = ExperimentReport | GalleryProbeReport


def _config_from_row(row: pd.Series) -> ExperimentConfig:
    values = {name: row[name] for name in CONFIG_FIELDS}
    # unwrap numpy scalars for pydantic
    return ExperimentConfig(**{k: v.item() if hasattr(v, "item") else v for k, v in values.items()})


def _timing_from_row(row: pd.Series) -> dict:
    return {name: float(row[name]) for name in TIMING_FIELDS if name in row.index}


def emit_report(
    report: Report, path: str | Path, format: ReportFormat = "json", include_timing: bool = True
) -> str:
    """Writes a report as JSON (one object) or CSV (one row per trial or probe set)"""
    try:
        if format == "json":
            exclude = None if include_timing else set(TIMING_FIELDS)
            Path(path).write_text(report.model_dump_json(indent=2, exclude=exclude) + "\n")
        elif format == "csv":
            frame = report.to_frame(include_timing=include_timing)
            frame.to_csv(path, index=False, float_format=REAL_FORMAT)
        else:
            raise ValueError(f"Unknown report format: {format}")
    except OSError as err:
        raise IoFailureError(f"Could not write report to {path}: {err}") from err

    logging.info(f"Wrote {format} report to {path}")
    return str(path)


def read_report(path: str | Path, kind: type[Report] = ExperimentReport) -> Report:
    """Parses a report written by emit_report; the format follows the file suffix"""
    if str(path).lower().endswith(".csv"):
        # seeds may exceed the signed 64-bit range
        frame = pd.read_csv(
            path,
            dtype={"trial_seed": str, "seed": str, "probe_set": str},
            float_precision="round_trip",
        )
        if frame.empty:
            raise DataError(f"{path} holds no report rows")
        return kind.from_frame(frame)
    return kind.model_validate_json(Path(path).read_text())
