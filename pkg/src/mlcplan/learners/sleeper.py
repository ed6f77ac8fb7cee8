"""A deliberately slow learner used to exercise timeouts and the runtime guard."""
import time

import numpy as np

from .._common import check_deadline
from .base import ConstantPredictor

_TICK = 0.01


def sleep(seconds):
    """Sleep in small ticks so an active deadline interrupts it."""
    end = time.monotonic() + seconds
    while True:
        check_deadline()
        left = end - time.monotonic()
        if left <= 0:
            return
        time.sleep(min(_TICK, left))


def fit(X, y, n_classes, params, seed, nested=None):
    return ConstantPredictor(n_classes, int(np.argmax(np.bincount(y, minlength=n_classes))))
