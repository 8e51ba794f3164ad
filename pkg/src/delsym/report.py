"""Serialisation of matrices and experiment results to CSV and JSON.

CSV: comma separated, LF line endings, UTF-8, '.' as decimal point; the
empty output string is written as ``-``.  JSON is written with sorted keys
and two-space indentation so identical results give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable

from .bitstring import BitString
from .channel import TransitionMatrix

EMPTY_LABEL = "-"


def label(x: BitString) -> str:
    return x.render() or EMPTY_LABEL


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _csv_text(header: list[str], rows: Iterable[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def matrix_csv(m: TransitionMatrix) -> str:
    header = ["input"] + [label(y) for y in m.columns]
    rows = ([label(x)] + [fraction_text(v) for v in row] for x, row in m.iter_rows())
    return _csv_text(header, rows)


def matrix_json(m: TransitionMatrix) -> dict:
    return {
        "n": m.n,
        "kind": m.param.kind,
        "param": m.param.text(),
        "columns": [label(y) for y in m.columns],
        "rows": {label(x): [fraction_text(v) for v in row] for x, row in m.iter_rows()},
    }


def entropy_classes_rows(report) -> list[list]:
    return [
        [report.n, label(x), orbit_id, fp_id, f"{h:.12f}"]
        for x, orbit_id, fp_id, h in report.rows()
    ]


ENTROPY_CLASSES_HEADER = ["n", "input", "orbit_id", "fingerprint_class_id", "entropy_bits"]


def entropy_classes_csv(report) -> str:
    return _csv_text(ENTROPY_CLASSES_HEADER, entropy_classes_rows(report))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_matrix_csv(text: str) -> tuple[list[str], dict[str, list[Fraction]]]:
    """Inverse of :func:`matrix_csv`: column labels and exact rows keyed by input label."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = {r[0]: [Fraction(v) for v in r[1:]] for r in reader}
    return header[1:], rows
