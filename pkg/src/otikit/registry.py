"""Records which public operations have been exercised (used by the CLI acceptance run)."""

import functools

TOUCHED = set()
REGISTERED = set()


def op(name):
    REGISTERED.add(name)

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            TOUCHED.add(name)
            return fn(*args, **kwargs)
        wrapper.op_name = name
        return wrapper
    return deco


def reset():
    TOUCHED.clear()
