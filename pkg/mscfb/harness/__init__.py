from .config import ExperimentConfig  # noqa: F401
from .manifest import (  # noqa: F401
    DatasetManifest,
    ManifestEntry,
    index_directory,
    load_manifest,
    load_samples,
    write_manifest,
)
from .protocols import (  # noqa: F401
    random_split,
    run_gallery_probe,
    run_parameter_sweep,
    run_repeated_trials,
    split_indices,
)
from .report import ExperimentReport, GalleryProbeReport, emit_report, read_report  # noqa: F401
from .synthetic import generate_synthetic, write_synthetic  # noqa: F401
