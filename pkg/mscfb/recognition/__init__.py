from .classify import (  # noqa: F401
    Gallery,
    classify_cosine_nn,
    classify_max,
    cosine_scores,
    cosine_similarity,
)
from .features import (  # noqa: F401
    FeatureVector,
    build_gallery,
    extract_feature_matrix,
    extract_features,
    extract_features_blockwise,
    read_features_csv,
    write_features_csv,
)
