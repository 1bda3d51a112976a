"""Key-value store for asset metadata shared between server and clients.

Clients that spawn meshes from external editors publish an info record
here; every other client can then resolve the uid to a download URL and
fetch the same mesh. Last writer wins on uid collisions — the overwrite
is reported to the caller and logged, never silently dropped.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

from ..core.geometry import Vec3
from ..errors import NotFound

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssetInfoRecord:
    uid: str
    name: str
    download_url: str
    location: Vec3 | None = None
    source: str = "catalog"

    def __post_init__(self):
        if not self.uid:
            raise ValueError("asset uid must be non-empty")

    def to_payload(self) -> dict:
        payload = {
            "uid": self.uid,
            "name": self.name,
            "download_url": self.download_url,
            "source": self.source,
        }
        if self.location is not None:
            payload["location"] = list(self.location.as_tuple())
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "AssetInfoRecord":
        loc = payload.get("location")
        return cls(
            uid=payload["uid"],
            name=payload.get("name", ""),
            download_url=payload.get("download_url", ""),
            location=Vec3(*loc) if loc is not None else None,
            source=payload.get("source", "catalog"),
        )


@dataclass
class AssetInfoStore:
    _records: dict[str, AssetInfoRecord] = field(default_factory=dict)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    def put(self, record: AssetInfoRecord) -> bool:
        """Insert or replace; returns True when an existing uid was replaced."""
        with self._lock:
            overwritten = record.uid in self._records
            self._records[record.uid] = record
        if overwritten:
            log.warning("asset info for %s overwritten (last writer wins)", record.uid)
        return overwritten

    def get(self, uid: str) -> AssetInfoRecord:
        with self._lock:
            try:
                return self._records[uid]
            except KeyError:
                raise NotFound(f"no asset info recorded for uid {uid!r}") from None

    def has(self, uid: str) -> bool:
        with self._lock:
            return uid in self._records

    def uids(self) -> list[str]:
        with self._lock:
            return sorted(self._records)

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)
