"""Cooperative cancellation and progress reporting for long runs.

Training code receives an optional RunContext and calls checkpoint() at its
natural unit boundaries (fold, member tree, k-means iteration, rule level).
Cancellation is only ever observed at those checkpoints, never preemptively.
"""

from __future__ import annotations

import threading


class RunCancelled(Exception):
    """Raised inside a run when its cancellation flag is observed."""


class RunContext:
    def __init__(self):
        self._cancel = threading.Event()
        self._progress = 0.0
        self._lock = threading.Lock()

    def request_cancel(self):
        self._cancel.set()

    @property
    def cancel_requested(self):
        return self._cancel.is_set()

    def checkpoint(self):
        """Abort the run if cancellation was requested."""
        if self._cancel.is_set():
            raise RunCancelled()

    def set_progress(self, fraction):
        # progress is monotone: late or out-of-order updates never move it back
        with self._lock:
            if fraction > self._progress:
                self._progress = min(float(fraction), 1.0)

    @property
    def progress(self):
        with self._lock:
            return self._progress


def checkpoint(ctx):
    """Checkpoint helper tolerating ctx=None."""
    if ctx is not None:
        ctx.checkpoint()
