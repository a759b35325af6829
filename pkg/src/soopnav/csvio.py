"""Deterministic CSV emission.

All floating-point numbers are written in fixed scientific notation
with 17 significant digits so repeated runs are byte-identical and
diffable, and round-trip through float() losslessly.
"""

from __future__ import annotations

from pathlib import Path


def fmt(value) -> str:
    """Format one CSV cell: floats at full precision, None empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def write_csv(path: str | Path, header: str, rows) -> Path:
    """Write rows (iterables of cells) under a fixed header line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(cell) for cell in row) + "\n")
    return path
