"""Record and survey files.

CSV files open with ``#``-prefixed lines carrying a JSON provenance block,
followed by a mandatory header row.  Floats are written at 12 significant
digits.  Nothing time-dependent goes into a file, so identical inputs give
byte-identical outputs.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
from pathlib import Path

from . import __version__
from .ensemble import CSV_COLUMNS, RealizationRecord

SURVEY_COLUMNS = ("chain_id", "i", "j", "d", "F")
OUTDIR_ENV = "RANDSINGLET_OUTDIR"


class ParseError(ValueError):
    pass


def output_dir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV, "."))


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def provenance(command: str, config: dict) -> dict:
    return {"artifact": "randsinglet", "version": __version__,
            "command": command, "config": config}


def _header(prov: dict) -> str:
    return "# " + json.dumps(prov, sort_keys=True) + "\n"


def write_table(path, columns, rows, prov: dict) -> None:
    buf = _io.StringIO()
    buf.write(_header(prov))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    Path(path).write_text(buf.getvalue())


def read_table(path):
    """Returns (provenance dict or None, header, rows as lists of strings)."""
    text = Path(path).read_text()
    prov = None
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            if prov is None:
                try:
                    prov = json.loads(line[1:].strip())
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{path}: bad provenance line: {exc}") from None
            continue
        if line.strip():
            body.append(line)
    if not body:
        raise ParseError(f"{path}: no header row")
    rows = list(csv.reader(body))
    return prov, rows[0], rows[1:]


def write_records(path, records, prov: dict) -> None:
    rows = ([getattr(r, c) for c in CSV_COLUMNS] for r in records)
    write_table(path, CSV_COLUMNS, rows, prov)


def read_records(path):
    prov, header, rows = read_table(path)
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"{path}: not a record file, missing columns {missing}")
    col = {c: header.index(c) for c in CSV_COLUMNS}
    ints = {"realization", "L", "left", "right", "d"}
    seed = (prov or {}).get("config", {}).get("seed", 0)
    records = []
    for n, row in enumerate(rows, start=2):
        try:
            kw = {}
            for c in CSV_COLUMNS:
                v = row[col[c]]
                kw[c] = v if c == "boundary" else (int(v) if c in ints else float(v))
            records.append(RealizationRecord(**kw, master_seed=int(seed or 0)))
        except (IndexError, ValueError) as exc:
            raise ParseError(f"{path}: row {n}: {exc}") from None
    return prov, records


def write_survey(path, survey, prov: dict) -> None:
    rows = ((cid, p.i, p.j, p.d, p.F) for cid, pairs in survey for p in pairs)
    write_table(path, SURVEY_COLUMNS, rows, prov)


def read_fidelities(path):
    """F column from either a record or a survey file."""
    prov, header, rows = read_table(path)
    if "F" not in header:
        raise ParseError(f"{path}: no F column")
    k = header.index("F")
    try:
        return prov, header, rows, [float(r[k]) for r in rows]
    except (IndexError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
