"""Soft wall-clock budget, checked inside the long-running loops."""

import contextlib
import contextvars
import time

from .errors import BudgetExceeded

_deadline = contextvars.ContextVar("frobkill_deadline", default=None)


@contextlib.contextmanager
def time_budget(ms):
    """Raise BudgetExceeded from `check()` once `ms` milliseconds have elapsed."""
    if ms is None:
        yield
        return
    token = _deadline.set(time.monotonic() + ms / 1000.0)
    try:
        yield
    finally:
        _deadline.reset(token)


def check():
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise BudgetExceeded("global time budget exhausted")


_pair_cap = contextvars.ContextVar("frobkill_pair_cap", default=None)


@contextlib.contextmanager
def pair_cap(n):
    """Default Gröbner pair budget for every basis computed inside the block."""
    token = _pair_cap.set(n)
    try:
        yield
    finally:
        _pair_cap.reset(token)


def default_pairs(fallback):
    n = _pair_cap.get()
    return fallback if n is None else n
