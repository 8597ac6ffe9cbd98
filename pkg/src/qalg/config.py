"""Runtime limits.

Dense realizations scale as 4**n_modes in memory, so they are capped.  The
cap can be raised per process through the QALG_DENSE_LIMIT environment
variable.
"""

import os

DEFAULT_DENSE_LIMIT = 10
DEFAULT_ENUM_LIMIT = 8

_ENV_VAR = "QALG_DENSE_LIMIT"


def dense_limit() -> int:
    """Largest mode count for which dense matrices may be built."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_DENSE_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value}")
    return value
