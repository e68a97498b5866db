"""Ordering and serialization of opaque labels.

Objects, arrows and group elements are labelled by strings, ints, tuples of
labels, or path objects exposing ``sort_key``/``to_json``.  Every choice made
by the library (representatives, witnesses, search order) uses ``label_key``
so results are reproducible.
"""
from __future__ import annotations

from typing import Any, Iterable


def label_key(x: Any):
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, bool):
        raise TypeError("booleans are not valid labels")
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, tuple):
        return (2, tuple(label_key(i) for i in x))
    key = getattr(x, "sort_key", None)
    if key is not None:
        return (3, key())
    raise TypeError(f"unsupported label {x!r}")


def sorted_labels(xs: Iterable[Any]) -> list:
    return sorted(xs, key=label_key)


def to_json(x: Any):
    if isinstance(x, (str, int)) or x is None:
        return x
    if isinstance(x, tuple) or isinstance(x, list):
        return [to_json(i) for i in x]
    conv = getattr(x, "to_json", None)
    if conv is not None:
        return conv()
    if isinstance(x, dict):
        return {render(k): to_json(v) for k, v in x.items()}
    raise TypeError(f"cannot serialize {x!r}")


def render(x: Any) -> str:
    """Compact string form of a label, used for JSON object keys."""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, tuple):
        return "(" + ",".join(render(i) for i in x) + ")"
    r = getattr(x, "render", None)
    if r is not None:
        return r()
    return repr(x)
