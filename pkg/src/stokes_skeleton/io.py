"""JSON input and deterministic report output."""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ParseError, ValidationError

CAP_ENV = "STOKES_CAP"
DEFAULT_CAP = 10 ** 7


def version() -> str:
    from . import __version__

    return __version__


def cap_from_env(default: int = DEFAULT_CAP) -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw == "":
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ValidationError(f"{CAP_ENV} must be positive, got {cap}")
    return cap


def load_json(path: str | os.PathLike) -> Any:
    """Parse a JSON file, reporting syntax errors with line and column."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), exc.lineno, exc.colno, exc.msg) from None


def digest(path: str | os.PathLike) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class ExperimentConfig:
    """One command invocation; ``inputs`` maps role names to file paths."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    cap: int = DEFAULT_CAP
    tol: float = 1e-9
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.cap <= 0:
            raise ValidationError(f"cap must be positive, got {self.cap}")
        if not self.tol > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tol}")

    def echo(self) -> dict:
        return {"command": self.command, "inputs": dict(self.inputs), "options": dict(self.options),
                "cap": self.cap, "tol": self.tol, "seed": self.seed}


@dataclass
class Report:
    """Result of one command.  Everything except ``wall_clock_s`` is deterministic."""

    config: ExperimentConfig
    results: dict
    flags: dict[str, bool]
    input_digests: dict[str, str] = field(default_factory=dict)
    wall_clock_s: float = 0.0
    error: dict | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.flags.values())

    def body(self) -> dict:
        doc = {"version": version(), "config": self.config.echo(), "input_digests": dict(self.input_digests),
               "results": self.results, "flags": dict(self.flags), "pass": self.passed}
        if self.error is not None:
            doc["error"] = self.error
        return doc

    def to_json(self) -> dict:
        return {**self.body(), "wall_clock_s": round(self.wall_clock_s, 6)}


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def resolve(base: str | os.PathLike, inputs: Mapping[str, str]) -> dict[str, str]:
    """Make relative input paths relative to ``base``."""
    out = {}
    for role, p in inputs.items():
        q = Path(p)
        out[role] = str(q if q.is_absolute() else Path(base) / q)
    return out
