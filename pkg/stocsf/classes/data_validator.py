"""Sanity checks on curvature states."""
import logging

import numpy as np

from ..exceptions import NumericalStateError

_LOGGER = logging.getLogger(__name__)


def is_state_sane(f, L) -> bool:
    """Check that every curvature sample and the length are finite."""
    f = np.asarray(f)
    if not np.all(np.isfinite(f)):
        bad = int(np.count_nonzero(~np.isfinite(f)))
        _LOGGER.debug("Sanity check failed: %s nonfinite curvature samples of %s", bad, len(f))
        return False
    if not np.isfinite(L):
        _LOGGER.debug("Sanity check failed: length is %s", L)
        return False
    return True


def ensure_finite(f, L, context: str):
    """Raise NumericalStateError when the state after `context` is not sane."""
    if not is_state_sane(f, L):
        raise NumericalStateError(f"Nonfinite state after {context}")
