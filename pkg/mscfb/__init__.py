from .filterbank import train_all  # noqa: F401
from .harness import cli  # noqa: F401
from .imaging import preprocess  # noqa: F401
