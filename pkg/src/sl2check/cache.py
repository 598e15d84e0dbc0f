"""Content-addressed on-disk cache of run reports.

A cell is keyed by (check, params, code version).  Files are written to a
temporary name in the same directory and renamed into place, so readers
never observe a partial file.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .registry import RunReport, code_version, dumps

ENV_VAR = "SL2CHECK_CACHE_DIR"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "sl2check"


def cell_key(check: str, params: dict) -> str:
    ident = dumps({"check": check, "params": params, "code_version": code_version()})
    return hashlib.sha256(ident.encode()).hexdigest()


class ResultCache:
    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else default_dir()

    def path(self, check: str, params: dict) -> Path:
        return self.root / f"{cell_key(check, params)}.json"

    def put(self, report: RunReport) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        target = self.path(report.check, report.params)
        body = dumps({"payload": report.payload(), "wall_time": report.wall_time})
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(body)
            os.replace(tmp, target)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return target

    def get(self, check: str, params: dict) -> RunReport | None:
        path = self.path(check, params)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, UnicodeDecodeError):
            return None  # unreadable cell counts as a miss
        if not isinstance(data, dict) or "payload" not in data:
            return None
        return RunReport.from_payload(data["payload"], data.get("wall_time", 0.0))
