"""
On-disk memo of degree bases, one JSON file per (input digest, key).

Layout: ``<directory>/<digest>/<key>.json``. Unreadable or corrupt entries are treated as
misses and rebuilt.
"""

import json
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class BasisCache:
    """
    Args:
        directory: Cache root, created on first store
    """

    def __init__(self, directory: str):
        self.directory = Path(directory)
        self._lock = threading.Lock()
        self.stats = {"hits": 0, "misses": 0, "stored": 0, "errors": []}

    def _path(self, digest: str, key: str) -> Path:
        return self.directory / digest / f"{key}.json"

    def load(self, digest: str, key: str) -> Optional[Dict[str, Any]]:
        path = self._path(digest, key)
        if not path.exists():
            self.stats["misses"] += 1
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                payload = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            self.stats["errors"].append(str(e))
            self.stats["misses"] += 1
            return None
        self.stats["hits"] += 1
        logger.debug(f"Cache hit {digest[:12]}/{key}")
        return payload

    def store(self, digest: str, key: str, payload: Dict[str, Any]) -> None:
        path = self._path(digest, key)
        with self._lock:
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                fd, temp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(payload, f)
                os.replace(temp, path)
                self.stats["stored"] += 1
            except OSError as e:
                logger.error(f"Failed to write cache entry {path}: {e}")
                self.stats["errors"].append(str(e))
                raise
