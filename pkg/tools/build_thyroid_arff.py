#!/usr/bin/env python3
"""Build data/uci/thyroid-ann.arff from the raw UCI thyroid (ANN) files.

The UCI "thyroid disease (ANN)" distribution ships two whitespace-separated
files, ann-train.data (3772 rows) and ann-test.data (3428 rows). Each row has
21 feature columns (15 binary flags plus 6 scaled measurements, all numeric)
followed by a class label in {1, 2, 3}. The evaluation dataset is the union
of both files, 7200 instances total.

Usage: build_thyroid_arff.py ANN_TRAIN ANN_TEST OUT_ARFF
"""

import sys


def main(train_path, test_path, out_path):
    rows = []
    for path in (train_path, test_path):
        with open(path) as fh:
            for line in fh:
                cells = line.split()
                if not cells:
                    continue
                if len(cells) != 22:
                    raise SystemExit(f"{path}: expected 22 columns, got {len(cells)}")
                rows.append(cells)
    if len(rows) != 7200:
        raise SystemExit(f"expected 7200 instances, got {len(rows)}")

    with open(out_path, "w") as out:
        out.write("% UCI thyroid disease (ANN version), ann-train.data + ann-test.data\n")
        out.write("% 7200 instances, 21 numeric attributes, class in {1,2,3}\n")
        out.write("@relation thyroid-ann\n\n")
        for i in range(21):
            out.write(f"@attribute a{i + 1} numeric\n")
        out.write("@attribute class {1,2,3}\n\n@data\n")
        for cells in rows:
            out.write(",".join(cells) + "\n")
    print(f"wrote {out_path}: {len(rows)} instances")


if __name__ == "__main__":
    if len(sys.argv) != 4:
        raise SystemExit(__doc__)
    main(*sys.argv[1:4])
