"""Content-addressed result cache.

Keys are sha256 hashes of (subcommand, canonicalized parameter set,
code version tag); payloads are opaque bytes stored one file per key.
Writes are atomic (temp file + rename) so interrupted runs never leave
partial entries; unreadable entries are treated as misses.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings

from . import __version__


def make_key(subcommand: str, params: dict, version: str = __version__) -> str:
    blob = json.dumps({"subcommand": subcommand, "params": params,
                       "version": version},
                      sort_keys=True, default=repr)
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir
        os.makedirs(cache_dir, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, key + ".bin")

    def get(self, key: str) -> bytes | None:
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "rb") as fh:
                payload = fh.read()
        except OSError as exc:
            warnings.warn(f"cache entry {key} unreadable ({exc}); "
                          "falling back to recomputation", stacklevel=2)
            return None
        return payload

    def put(self, key: str, payload: bytes) -> None:
        path = self._path(key)
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)

    def get_json(self, key: str):
        payload = self.get(key)
        if payload is None:
            return None
        try:
            return json.loads(payload.decode())
        except (ValueError, UnicodeDecodeError) as exc:
            warnings.warn(f"cache entry {key} corrupt ({exc}); "
                          "falling back to recomputation", stacklevel=2)
            return None

    def put_json(self, key: str, obj) -> None:
        self.put(key, json.dumps(obj, sort_keys=True).encode())
