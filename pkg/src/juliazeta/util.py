"""Small shared helpers: deterministic parallel map, atomic artifact
writes, and shortest round-trip float formatting."""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads: int = 1) -> list:
    """Map `fn` over `items`, preserving order.

    Work is chunked over a thread pool when ``threads > 1``; results are
    reassembled in input order, so the output is identical for any thread
    count (each item's computation is pure).
    """
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def fmt(x) -> str:
    """Shortest decimal string that round-trips the value."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def atomic_write_text(path: str, text: str) -> None:
    """Write `text` to `path` via a temp file + rename in the same dir."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: str, rows) -> None:
    """Write a CSV artifact with round-trip float formatting."""
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
