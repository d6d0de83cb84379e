"""Deterministic CSV/JSON artifact writers.

Every file is byte-reproducible: floats at 17 significant digits (enough to
round-trip a double), LF line endings, sorted JSON keys, and no timestamps
inside data files.
"""

from __future__ import annotations

import json
from typing import Iterable

from .sweep import SweepRow
from .trajectory import Trajectory

__all__ = ["fmt17", "write_trajectory_csv", "write_sweep_csv", "write_json"]


def fmt17(x: float) -> str:
    """17 significant digits, the round-trip format for IEEE doubles."""
    return f"{x:.17g}"


def write_trajectory_csv(path, t: Trajectory) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("r,y,yp\n")
        for r, y, yp in zip(t.r, t.y, t.yp):
            fh.write(f"{fmt17(r)},{fmt17(y)},{fmt17(yp)}\n")


def write_sweep_csv(path, rows: Iterable[SweepRow]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("c,verdict,r_event,final_y,final_yp\n")
        for row in rows:
            r_ev = "" if row.r_event is None else fmt17(row.r_event)
            fh.write(
                f"{fmt17(row.c)},{row.verdict.value},{r_ev},"
                f"{fmt17(row.final_y)},{fmt17(row.final_yp)}\n"
            )


def write_json(path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
