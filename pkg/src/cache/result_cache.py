"""
Persistent result cache for exact counts
Append-only text file, one record per line: n <tab> count <tab> method <tab> version
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from src.core.config import settings
from src.core.exceptions import CacheError
from src.core.logger import get_logger

logger = get_logger(__name__)

FIELD_SEPARATOR = "\t"


@dataclass(frozen=True)
class CacheRecord:
    """One computed (n, D(n)) pair"""

    n: int
    count: int
    method: str
    version: str

    def to_line(self) -> str:
        return FIELD_SEPARATOR.join((str(self.n), str(self.count), self.method, self.version)) + "\n"

    @classmethod
    def from_line(cls, line: str) -> "CacheRecord":
        parts = line.rstrip("\n").split(FIELD_SEPARATOR)
        if len(parts) != 4:
            raise ValueError(f"expected 4 fields, got {len(parts)}")
        n, count = int(parts[0]), int(parts[1])
        if n < 1 or count < 1:
            raise ValueError(f"non-positive value in record {parts}")
        return cls(n=n, count=count, method=parts[2], version=parts[3])


class ResultCache:
    """
    File-backed cache of D(n)

    Records written by another artifact version are ignored. Malformed lines
    are skipped with a warning. The file is only ever appended to.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None, version: Optional[str] = None):
        self.path = Path(path or settings.cache_path)
        self.version = version or settings.app_version
        self._entries: Optional[Dict[int, CacheRecord]] = None
        self.hits = 0
        self.misses = 0

    def _load(self) -> Dict[int, CacheRecord]:
        if self._entries is not None:
            return self._entries

        entries: Dict[int, CacheRecord] = {}
        if not self.path.exists():
            logger.debug(f"No cache file at {self.path}")
            self._entries = entries
            return entries

        try:
            with open(self.path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except OSError as e:
            raise CacheError(f"cannot read cache file {self.path}: {e}") from e

        skipped = 0
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = CacheRecord.from_line(line)
            except ValueError as e:
                logger.warning(f"{self.path}:{lineno}: skipping malformed record ({e})")
                continue
            if record.version != self.version:
                skipped += 1
                continue
            known = entries.get(record.n)
            if known is not None and known.count != record.count:
                logger.warning(
                    f"{self.path}:{lineno}: n={record.n} recorded as {known.count} "
                    f"and {record.count}; keeping the first"
                )
                continue
            entries.setdefault(record.n, record)

        logger.info(
            f"Loaded {len(entries)} cached counts from {self.path} "
            f"({skipped} records of other versions ignored)"
        )
        self._entries = entries
        return entries

    def ensure_writable(self) -> None:
        """Create the parent directory and check the file can be appended to"""
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8"):
                pass
        except OSError as e:
            raise CacheError(f"cache path {self.path} is not writable: {e}") from e

    def get(self, n: int) -> Optional[int]:
        record = self._load().get(n)
        if record is None:
            self.misses += 1
            logger.debug(f"Cache miss for n={n}")
            return None
        self.hits += 1
        logger.info(f"Cache hit for n={n} ({record.method})")
        return record.count

    def put(self, n: int, count: int, method: str) -> None:
        """Append a record unless this version already holds n"""
        entries = self._load()
        known = entries.get(n)
        if known is not None:
            if known.count != count:
                logger.warning(f"Cache holds D({n}) = {known.count}, not overwriting with {count}")
            return

        record = CacheRecord(n=n, count=count, method=method, version=self.version)
        self.ensure_writable()
        try:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(record.to_line())
        except OSError as e:
            raise CacheError(f"cannot append to cache file {self.path}: {e}") from e
        entries[n] = record
        logger.debug(f"Cached D({n}) via {method}")

    def records(self) -> List[CacheRecord]:
        """Current-version records, by n"""
        return [self._load()[n] for n in sorted(self._load())]

    def get_stats(self) -> Dict[str, object]:
        return {
            "path": str(self.path),
            "version": self.version,
            "entries": len(self._load()),
            "hits": self.hits,
            "misses": self.misses,
        }
