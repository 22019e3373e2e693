from __future__ import annotations

import logging
from collections.abc import Callable
from functools import wraps
from typing import Any

log = logging.getLogger(__name__)

# collection attribute that stands for the size of a domain object
_SIZED_BY = ("subnets", "neurons", "slots", "routes", "cores", "images")


def _shape(obj: Any) -> tuple[str, int | None]:
    """Return (type name, size) for *obj* if one can be found."""
    t = type(obj).__name__
    try:
        return t, len(obj)  # type: ignore[arg-type]
    except TypeError:
        pass
    for attr in _SIZED_BY:
        items = getattr(obj, attr, None)
        if isinstance(items, (tuple, list, dict)):
            return f"{t}.{attr}", len(items)
    return t, None


def validate_io(func: Callable[..., Any]) -> Callable[..., Any]:
    """Log input/output type and size of a top-level operation."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        arg = args[0] if args else (next(iter(kwargs.values())) if kwargs else None)
        in_t, in_len = _shape(arg)
        result = func(*args, **kwargs)
        out_t, out_len = _shape(result)
        log.info(
            "%s input=%s size=%s output=%s size=%s",
            func.__name__,
            in_t,
            in_len,
            out_t,
            out_len,
        )
        return result

    return wrapper
