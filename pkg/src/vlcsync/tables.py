"""Loader for the bundled code/source tables.

The data file holds one record per code: an id line followed by
(symbol, probability string, codeword) rows.  Probability strings are
preserved exactly so reports can echo them.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .codes import SourceModel, VlcCode

TABLE_SMALL_IDS = tuple(f"C{i}" for i in range(1, 17))
TABLE_ENGLISH_IDS = ("C17", "C18", "C19")


class UnknownCode(KeyError):
    """Requested code id is not in the bundled tables."""


def _data_text() -> str:
    return (resources.files("vlcsync") / "data" / "code_tables.txt").read_text()


def parse_table(text: str) -> dict[str, tuple[VlcCode, SourceModel]]:
    """Parse record-per-code text into (code, source) pairs."""
    entries: dict[str, tuple[VlcCode, SourceModel]] = {}
    current_id: str | None = None
    rows: list[tuple[str, str, str]] = []

    def flush():
        nonlocal current_id, rows
        if current_id is None:
            return
        if not rows:
            raise ValueError(f"record {current_id!r} has no symbol rows")
        symbols = tuple(r[0] for r in rows)
        probs = tuple(float(r[1]) for r in rows)
        codewords = tuple(r[2] for r in rows)
        code = VlcCode(current_id, symbols, codewords)
        source = SourceModel(symbols, probs, tuple(r[1] for r in rows))
        entries[current_id] = (code, source)
        current_id, rows = None, []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            if not line:
                flush()
            continue
        parts = line.split()
        if parts[0] == "code":
            flush()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed record header")
            current_id = parts[1]
        else:
            if current_id is None:
                raise ValueError(f"line {lineno}: symbol row outside a record")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected symbol, probability,"
                                 " codeword")
            rows.append((parts[0], parts[1], parts[2]))
    flush()
    return entries


@lru_cache(maxsize=1)
def load_tables() -> dict[str, tuple[VlcCode, SourceModel]]:
    return parse_table(_data_text())


def list_code_ids() -> list[str]:
    return list(load_tables())


def get_code(code_id: str) -> tuple[VlcCode, SourceModel]:
    try:
        return load_tables()[code_id]
    except KeyError:
        raise UnknownCode(code_id) from None
