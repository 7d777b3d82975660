"""CSV and key=value config formats used by the command line tools."""
import csv
import io

import numpy as np

from .trig import PointSet, SparseCoefFn

__all__ = [
    "write_csv",
    "coef_fn_to_csv",
    "coef_fn_from_csv",
    "samples_to_csv",
    "samples_from_csv",
    "read_config",
    "parse_config",
    "CsvAppender",
]


class CsvAppender:
    """Serializes rows to one CSV stream; the header is written with the first row."""

    def __init__(self, stream, columns):
        self.columns = list(columns)
        self._writer = csv.DictWriter(stream, fieldnames=self.columns, lineterminator="\n",
                                      extrasaction="ignore")
        self._started = False

    def append(self, row):
        if not self._started:
            self._writer.writeheader()
            self._started = True
        self._writer.writerow(row)

    def extend(self, rows):
        for row in rows:
            self.append(row)


def write_csv(rows, columns, path=None):
    """Write rows to ``path`` (or return the CSV text when ``path`` is None)."""
    buf = io.StringIO()
    app = CsvAppender(buf, columns)
    if not rows:
        csv.writer(buf, lineterminator="\n").writerow(columns)
    app.extend(rows)
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def _coord_names(d, stem):
    return [f"{stem}{i + 1}" for i in range(d)]


def coef_fn_to_csv(f):
    """Rows ``k1,...,kd,re,im``."""
    cols = _coord_names(f.d, "k") + ["re", "im"]
    rows = []
    for k, a in zip(f.indices, f.coef):
        row = {f"k{i + 1}": int(c) for i, c in enumerate(k)}
        row.update(re=repr(float(a.real)), im=repr(float(a.imag)))
        rows.append(row)
    return write_csv(rows, cols)


def coef_fn_from_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    kcols = [c for c in reader.fieldnames if c.startswith("k")]
    idx, coef = [], []
    for row in reader:
        idx.append([int(row[c]) for c in kcols])
        coef.append(float(row["re"]) + 1j * float(row["im"]))
    return SparseCoefFn(np.array(idx, dtype=np.int64).reshape(-1, len(kcols)), coef, d=len(kcols))


def samples_to_csv(xi, values):
    """Rows ``x1,...,xd,value_re,value_im`` in sampling order."""
    values = np.asarray(values)
    if values.shape[0] != xi.m:
        raise ValueError("one value per point is required")
    cols = _coord_names(xi.d, "x") + ["value_re", "value_im"]
    rows = []
    for x, val in zip(xi.points, values):
        row = {f"x{i + 1}": repr(float(c)) for i, c in enumerate(x)}
        row.update(value_re=repr(float(np.real(val))), value_im=repr(float(np.imag(val))))
        rows.append(row)
    return write_csv(rows, cols)


def samples_from_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    xcols = [c for c in reader.fieldnames if c.startswith("x")]
    pts, vals = [], []
    for row in reader:
        pts.append([float(row[c]) for c in xcols])
        vals.append(float(row["value_re"]) + 1j * float(row["value_im"]))
    return PointSet(np.array(pts).reshape(-1, len(xcols))), np.array(vals)


def parse_config(text):
    """Flat ``key = value`` lines; ``#`` starts a comment. Values stay strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def read_config(path):
    with open(path) as fh:
        return parse_config(fh.read())
