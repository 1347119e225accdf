"""Adapters from vendor/database layouts to the canonical signature file.

Only a generic column-table reader ships here.  Database-specific layouts
register a function ``text -> RawSignature`` in ``CONVERTERS``::

    @register("mydb")
    def read_mydb(text, id): ...
"""

from __future__ import annotations

import re
from typing import Callable

import numpy as np

from .errors import FormatError
from .ingest import RawSignature

CONVERTERS: dict[str, Callable[[str, str], RawSignature]] = {}

# header aliases -> canonical column
ALIASES = {
    "x": "x", "xcoord": "x",
    "y": "y", "ycoord": "y",
    "t": "t", "time": "t", "timestamp": "t", "ts": "t",
    "p": "p", "z": "p", "pressure": "p",
    "u": "pen_down", "pendown": "pen_down", "pen_down": "pen_down", "button": "pen_down",
}


def register(name: str):
    def deco(fn):
        CONVERTERS[name] = fn
        return fn
    return deco


@register("columns")
def read_columns(text: str, id: str) -> RawSignature:
    """Delimited table with a header row naming the columns.

    Delimiters may be commas, semicolons, tabs or spaces.  Columns are
    matched case-insensitively against ``ALIASES``; unknown columns
    (azimuth, altitude, ...) are ignored.  Timestamps in seconds are not
    detected; the file must use milliseconds.
    """
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(rows) < 3:
        raise FormatError(f"{id}: need a header and at least 2 data rows")
    split = re.compile(r"[,;\t ]+")
    header = [h.strip().lower() for h in split.split(rows[0])]
    cols = {}
    for k, h in enumerate(header):
        if h in ALIASES and ALIASES[h] not in cols:
            cols[ALIASES[h]] = k
    for needed in ("x", "y", "t"):
        if needed not in cols:
            raise FormatError(f"{id}: no {needed!r} column in header {header}")
    try:
        table = np.array([[float(v) for v in split.split(r)] for r in rows[1:]])
    except ValueError as exc:
        raise FormatError(f"{id}: {exc}") from None
    if table.ndim != 2 or table.shape[1] != len(header):
        raise FormatError(f"{id}: rows do not match the header width")
    t = table[:, cols["t"]]
    return RawSignature(
        id=id,
        x=table[:, cols["x"]],
        y=table[:, cols["y"]],
        t=t - t[0],
        p=table[:, cols["p"]] if "p" in cols else None,
        # the canonical format has no pen-state column without pressure
        pen_down=table[:, cols["pen_down"]] != 0 if "pen_down" in cols and "p" in cols else None,
    )


def convert(text: str, id: str, layout: str = "columns") -> RawSignature:
    if layout not in CONVERTERS:
        raise FormatError(f"unknown layout {layout!r}; known: {', '.join(sorted(CONVERTERS))}")
    return CONVERTERS[layout](text, id)
