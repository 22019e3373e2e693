"""Per-stage timing records: one ``SENSOR:`` JSON line per CLI stage run."""

import argparse
import functools
import hashlib
import inspect
import json
import logging
import pathlib
import time

LOG = logging.getLogger("sensors")


def _digest(args: tuple, kwargs: dict) -> str:
    plain = [vars(a) if isinstance(a, argparse.Namespace) else a for a in args]
    return hashlib.sha256(repr((plain, kwargs)).encode()).hexdigest()[:12]


def sensor(stage: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*a, **kw):
            t0 = time.perf_counter()
            ok = True
            code = None
            try:
                code = fn(*a, **kw)
                return code
            except Exception:
                ok = False
                raise
            finally:
                payload = {
                    "stage": stage,
                    "fn": fn.__name__,
                    "file": pathlib.Path(inspect.getfile(fn)).name,
                    "ok": ok and not code,
                    "exit": code,
                    "dt_ms": round((time.perf_counter() - t0) * 1000, 2),
                    "args_sha": _digest(a, kw),
                }
                LOG.info("SENSOR: %s", json.dumps(payload, default=str))

        return wrapper

    return decorate
