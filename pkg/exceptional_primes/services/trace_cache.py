"""Append-only CSV cache of Frobenius traces, one file per curve model."""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Iterable, Mapping

from exceptional_primes.core.logging import get_logger
from exceptional_primes.services.exceptions import TraceCacheCorrupt

logger = get_logger(__name__)

HEADER_PREFIX = "# curve:"


def cache_file_name(curve_id: str) -> str:
    return "curve_" + curve_id.replace(",", "_") + ".csv"


class TraceCache:
    """Reads and appends ``p,a_p`` lines under a ``# curve:...`` header.

    A complete line that does not parse invalidates the whole file. A
    trailing line without newline is treated as an interrupted write and
    dropped.
    """

    def __init__(self, cache_dir: str | Path):
        self.cache_dir = Path(cache_dir)
        self._write_lock = threading.Lock()

    def path_for(self, curve_id: str) -> Path:
        return self.cache_dir / cache_file_name(curve_id)

    def load(self, curve_id: str) -> dict[int, int]:
        path = self.path_for(curve_id)
        if not path.exists():
            return {}

        text = path.read_text(encoding="utf-8")
        lines = text.split("\n")
        if lines and lines[-1] != "":
            logger.warning(
                "Ignoring incomplete trailing line in %s: %r", path.name, lines[-1]
            )
        complete = lines[:-1]

        if not complete:
            return {}
        expected = HEADER_PREFIX + curve_id
        if complete[0].strip() != expected:
            raise TraceCacheCorrupt(
                f"cache file {path} has a mismatched header",
                detail=f"expected {expected!r}, found {complete[0]!r}",
            )

        traces: dict[int, int] = {}
        for lineno, line in enumerate(complete[1:], start=2):
            if not line.strip():
                continue
            try:
                p_text, a_text = line.split(",")
                p, a_p = int(p_text), int(a_text)
            except ValueError as exc:
                raise TraceCacheCorrupt(
                    f"cache file {path} is corrupt",
                    detail=f"line {lineno}: {line!r}",
                ) from exc
            if traces.get(p, a_p) != a_p:
                raise TraceCacheCorrupt(
                    f"cache file {path} is corrupt",
                    detail=f"line {lineno}: conflicting trace for p={p}",
                )
            traces[p] = a_p

        logger.debug("Loaded %d cached traces for [%s]", len(traces), curve_id)
        return traces

    def append(
        self, curve_id: str, traces: Mapping[int, int] | Iterable[tuple[int, int]]
    ) -> None:
        items = sorted(traces.items() if isinstance(traces, Mapping) else traces)
        if not items:
            return

        with self._write_lock:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            path = self.path_for(curve_id)
            self._drop_partial_tail(path)
            new_file = not path.exists() or path.stat().st_size == 0
            with path.open("a", encoding="utf-8", newline="\n") as handle:
                if new_file:
                    handle.write(f"{HEADER_PREFIX}{curve_id}\n")
                for p, a_p in items:
                    handle.write(f"{p},{a_p}\n")
        logger.info("Appended %d traces to %s", len(items), path.name)

    @staticmethod
    def _drop_partial_tail(path: Path) -> None:
        if not path.exists():
            return
        data = path.read_bytes()
        if data and not data.endswith(b"\n"):
            cut = data.rfind(b"\n") + 1
            path.write_bytes(data[:cut])
