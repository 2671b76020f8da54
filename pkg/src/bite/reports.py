"""Tab-separated report format shared by analysis, defense and regret outputs.

Layout::

    #bite-report<TAB><kind><TAB><format version>
    #<key>=<value>            (zero or more metadata lines)
    <header row>
    <data rows>

Missing values are written as ``NA``; floats use ``repr`` so files
round-trip exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

FORMAT_VERSION = "1"
MAGIC = "#bite-report"
NA = "NA"


@dataclass
class Table:
    kind: str
    header: List[str]
    rows: List[List[object]]
    meta: Dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> List[object]:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def _cell(v) -> str:
    if v is None:
        return NA
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return NA if math.isnan(v) else repr(v)
    s = str(v)
    if "\t" in s or "\n" in s:
        raise ValueError(f"cell contains a tab or newline: {s!r}")
    return s


def _parse(s: str):
    if s == NA:
        return None
    if s in ("true", "false"):
        return s == "true"
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    return s


def format_table(table: Table) -> str:
    lines = [f"{MAGIC}\t{table.kind}\t{FORMAT_VERSION}"]
    lines += [f"#{k}={_cell(v)}" for k, v in table.meta.items()]
    lines.append("\t".join(table.header))
    for row in table.rows:
        if len(row) != len(table.header):
            raise ValueError("row width does not match header")
        lines.append("\t".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_table(path: Union[str, Path], table: Table) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_table(table), encoding="utf-8")
    return path


def parse_table(text: str) -> Table:
    lines = text.rstrip("\n").split("\n")
    first = lines[0].split("\t")
    if len(first) != 3 or first[0] != MAGIC:
        raise ValueError("not a bite report")
    if first[2] != FORMAT_VERSION:
        raise ValueError(f"unsupported report format version {first[2]!r}")
    meta, i = {}, 1
    while i < len(lines) and lines[i].startswith("#"):
        k, _, v = lines[i][1:].partition("=")
        meta[k] = v
        i += 1
    header = lines[i].split("\t")
    rows = [[_parse(c) for c in ln.split("\t")] for ln in lines[i + 1:]]
    return Table(first[1], header, rows, meta)


def read_table(path: Union[str, Path]) -> Table:
    return parse_table(Path(path).read_text(encoding="utf-8"))


def nan_to_none(v: Optional[float]) -> Optional[float]:
    return None if v is None or (isinstance(v, float) and math.isnan(v)) else v

