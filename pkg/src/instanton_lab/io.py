"""JSON file formats (rationals as strings) and the bundled fixture corpus."""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .exact import ExactError
from .monad import NetOfQuadrics
from .y4 import PencilOfQuadrics
from .y5 import SkewTriple

FIXTURE_ENV = "INSTANTON_LAB_FIXTURES"


class InputError(ExactError):
    pass


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("instanton_lab") / "fixtures"))


def resolve(path: str) -> Path:
    """``@name`` refers to ``<fixture dir>/name.json``; anything else is a path."""
    if path.startswith("@"):
        return fixture_dir() / f"{path[1:]}.json"
    return Path(path)


def load_json(path: str):
    p = resolve(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{p}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _decode(path: str, build):
    data = load_json(path)
    try:
        return build(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{resolve(path)}: invalid contents ({exc})") from exc


def load_net(path: str) -> NetOfQuadrics:
    return _decode(path, NetOfQuadrics.from_json)


def load_space(path: str) -> SkewTriple:
    return _decode(path, SkewTriple.from_json)


def load_pencil(path: str) -> PencilOfQuadrics:
    return _decode(path, PencilOfQuadrics.from_json)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(obj, path: str | None) -> str:
    text = dumps(obj)
    if path:
        Path(path).write_text(text)
    return text
