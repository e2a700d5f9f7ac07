#!/usr/bin/env python3
"""Fetch the original Wisconsin breast-cancer dataset and convert it to CSV.

Downloads ``breast-cancer-wisconsin.data`` (699 clinical cases, nine
1..10-valued attributes plus a benign/malignant class) from the UCI
repository and writes it as ``src/hornpac/data/breast_cancer.csv`` next
to the packaged scaling spec.  Requires network access; the acceptance
test for this dataset is skipped while the file is absent.

Missing measurements appear as ``?`` in the source and are kept as a
value of their own; nominal scaling then gives them a dedicated
attribute (e.g. ``bare_nuclei=?``).
"""

from __future__ import annotations

import csv
import sys
import urllib.request
from pathlib import Path

URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "breast-cancer-wisconsin/breast-cancer-wisconsin.data"
)

COLUMNS = [
    "id",
    "clump_thickness",
    "cell_size_uniformity",
    "cell_shape_uniformity",
    "marginal_adhesion",
    "single_epithelial_cell_size",
    "bare_nuclei",
    "bland_chromatin",
    "normal_nucleoli",
    "mitoses",
    "class",
]

CLASS_NAMES = {"2": "benign", "4": "malignant"}


def main() -> int:
    target = Path(__file__).resolve().parent.parent / "src" / "hornpac" / "data" / "breast_cancer.csv"
    print(f"fetching {URL}")
    with urllib.request.urlopen(URL, timeout=60) as response:
        raw = response.read().decode("ascii")
    rows = [line.split(",") for line in raw.splitlines() if line.strip()]
    if len(rows) != 699:
        print(f"warning: expected 699 instances, got {len(rows)}")
    with target.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for row in rows:
            if len(row) != len(COLUMNS):
                print(f"skipping malformed row: {row}")
                continue
            row[-1] = CLASS_NAMES.get(row[-1], row[-1])
            writer.writerow(row)
    print(f"wrote {target} ({len(rows)} instances)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
