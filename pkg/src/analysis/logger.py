from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from pathlib import Path

from models.schemas import CheckResult


def default_log_path() -> Path | None:
    value = os.getenv("INDEX_CODING_LOG_PATH")
    return Path(value) if value else None


def log_check(record: CheckResult, path: str | Path | None = None) -> None:
    """
    Append one verification result as a JSON line. Does nothing when no path
    is given and INDEX_CODING_LOG_PATH is unset.
    """
    target = Path(path) if path else default_log_path()
    if target is None:
        return
    try:
        entry = {"ts": datetime.now(timezone.utc).isoformat()}
        entry.update(record.model_dump(mode="json", by_alias=True))
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")
    except Exception:
        # A broken log must not turn into a failed verification run.
        return
