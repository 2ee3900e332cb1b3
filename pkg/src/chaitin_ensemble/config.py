"""Run configuration and the optional ``key = value`` config file.

Example file::

    # defaults for every subcommand; command-line flags win
    tol = 1e-12
    step_limit = 10000000
    richardson = true
    jobs = 4
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Union

from .errors import DomainError
from .machine import DEFAULT_STEP_LIMIT


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-12
    step_limit: int = DEFAULT_STEP_LIMIT
    h_divisor: float = 16.0
    richardson: bool = False
    jobs: int = 1
    enumeration_bound: int = 30

    def merged(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, kind, raw: str):
    raw = raw.strip()
    try:
        if kind in (bool, "bool"):
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(raw)
        if kind in (int, "int"):
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        return float(raw)
    except ValueError:
        raise DomainError(f"config key {name!r}: cannot parse {raw!r}") from None


def load_config(path: Optional[Union[str, Path]], base: RunConfig = RunConfig()) -> RunConfig:
    if path is None:
        return base
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc.strerror}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise DomainError(f"bad config file {path}: {exc.message}") from None
    known = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    for key, raw in parser["run"].items():
        key = key.replace("-", "_")
        if key not in known:
            raise DomainError(f"unknown config key {key!r}")
        values[key] = _coerce(key, known[key], raw)
    return replace(base, **values)
