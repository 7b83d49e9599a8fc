"""Report assembly, error objects and the shipped JSON schema."""

from __future__ import annotations

import json
from importlib import resources

from .config import ConfigError
from .conley import ExcisionFailure, NoStrictPairFound
from .dyadic import NonDyadicError
from .figure import UnsupportedDimension
from .grid import GridError, HullAmbiguous
from .homology import FiberMismatch, ProjectionNotIso
from .isolation import NoIsolatingCollar
from .literals import LiteralError
from .pairs import NotIsolating, PairError
from .sampling import EmptyCover, ParseError

REPORT_VERSION = 1

EXIT_OK = 0
EXIT_AUDIT = 1
EXIT_CONFIG = 2
EXIT_ISOLATION = 3
EXIT_PAIR = 4
EXIT_EXCISION = 5


def exit_code(exc: BaseException) -> int:
    """Exit status for an exception raised while running a command."""
    if isinstance(exc, (NotIsolating, NoIsolatingCollar)):
        return EXIT_ISOLATION
    if isinstance(exc, (ExcisionFailure, ProjectionNotIso, FiberMismatch)):
        return EXIT_EXCISION
    if isinstance(exc, (PairError, NoStrictPairFound)):
        return EXIT_PAIR
    if isinstance(exc, (ConfigError, ParseError, LiteralError, GridError, NonDyadicError, EmptyCover,
                        HullAmbiguous, UnsupportedDimension, OSError)):
        return EXIT_CONFIG
    raise exc


def error_object(exc: BaseException, **extra) -> dict:
    obj = {"code": exit_code(exc), "type": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness:
        obj["witness"] = witness
    obj.update(extra)
    return obj


def envelope(kind: str, exit_status: int, **body) -> dict:
    out = {"kind": kind, "version": REPORT_VERSION, "exit_code": exit_status}
    out.update(body)
    return out


def dumps(report: dict) -> str:
    """Canonical text of a report: stable key order from construction, two-space indent."""
    return json.dumps(report, indent=2, ensure_ascii=False, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def schema() -> dict:
    """The JSON schema every report validates against."""
    text = resources.files("weakconley").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


__all__ = [
    "EXIT_AUDIT",
    "EXIT_CONFIG",
    "EXIT_EXCISION",
    "EXIT_ISOLATION",
    "EXIT_OK",
    "EXIT_PAIR",
    "REPORT_VERSION",
    "dumps",
    "envelope",
    "error_object",
    "exit_code",
    "schema",
]
