"""Run deeply recursive work (evaluation, term traversal) on a thread with a large C stack."""
from __future__ import annotations

import sys
import threading

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 150_000
_state = threading.local()


def deep_call(fn, *args, **kwargs):
    """``fn(*args, **kwargs)`` on a big-stack thread; nested calls run inline."""
    if getattr(_state, "deep", False):
        return fn(*args, **kwargs)
    box: dict = {}

    def target():
        _state.deep = True
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller's thread
            box["error"] = exc

    if sys.getrecursionlimit() < RECURSION_LIMIT:
        sys.setrecursionlimit(RECURSION_LIMIT)
    old = threading.stack_size()
    threading.stack_size(STACK_BYTES)
    try:
        t = threading.Thread(target=target, name="deep-call")
        t.start()
    finally:
        threading.stack_size(old)
    t.join()
    if "error" in box:
        raise box["error"]
    return box["value"]
