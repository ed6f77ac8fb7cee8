"""Seed derivation and cooperative deadlines."""
import contextlib
import contextvars
import time

import numpy as np

from .errors import EvaluationTimeout

_deadline = contextvars.ContextVar("mlcplan_deadline", default=None)


def derive_seed(seed, *keys) -> int:
    """Deterministic 32-bit child seed from a master seed and integer keys."""
    entropy = [int(seed) & 0xFFFFFFFF] + [int(k) & 0xFFFFFFFF for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


@contextlib.contextmanager
def deadline_scope(seconds):
    """Install a deadline ``seconds`` from now for :func:`check_deadline` calls.

    ``None`` means no deadline. Nested scopes keep the earlier deadline.
    """
    current = _deadline.get()
    new = None if seconds is None else time.monotonic() + float(seconds)
    if current is not None and (new is None or current < new):
        new = current
    token = _deadline.set(new)
    try:
        yield
    finally:
        _deadline.reset(token)


def check_deadline():
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise EvaluationTimeout("evaluation deadline exceeded")


def remaining_time():
    limit = _deadline.get()
    return None if limit is None else limit - time.monotonic()
