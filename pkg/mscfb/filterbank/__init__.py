from .bank import CorrelationFilterBank, FilterBankSet  # noqa: F401
from .model_io import decode_model, encode_model, load_model, save_model  # noqa: F401
from .training import (  # noqa: F401
    DEFAULT_ALPHA,
    DesignIntermediates,
    TrainingView,
    choose_path,
    class_mean,
    design_bank,
    design_intermediates,
    impostor_covariance,
    rayleigh_quotient,
    regularize,
    train_all,
)
