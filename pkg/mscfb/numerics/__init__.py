from .dft import dft_origin_correlation  # noqa: F401
from .linalg import (  # noqa: F401
    DenseMatrix,
    RealVector,
    as_matrix,
    as_vector,
    check_symmetric,
    cholesky_solve,
    dot,
    symmetrize,
    woodbury_solve,
)
