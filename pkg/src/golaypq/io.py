"""CSV/JSON writers.  Every file is written to a temp file and renamed into place."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    return atomic_write_text(path, csv_text(header, rows))


def write_json(path, doc) -> Path:
    return atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def pair_rows(pair):
    return [(i, a, b) for i, (a, b) in enumerate(zip(pair.x, pair.y))]


def design_rows(design):
    return [(n, b, w) for n, (b, w) in enumerate(zip(design.p, design.q))]


def _grid_rows(delays, thetas, *cols):
    kk, tt = np.meshgrid(delays, thetas, indexing="ij")
    flat = [kk.ravel().tolist(), tt.ravel().tolist()]
    flat += [np.asarray(c).ravel().tolist() for c in cols]
    return zip(*flat)


def ambiguity_rows(amap):
    """Rows ``k, theta, re, im`` ordered by k then theta."""
    return _grid_rows(amap.delays, amap.dopplers, amap.values.real, amap.values.imag)


def db_rows(delays, thetas, db):
    """Rows ``k, theta, db`` ordered by k then theta."""
    return _grid_rows(delays, thetas, db)
