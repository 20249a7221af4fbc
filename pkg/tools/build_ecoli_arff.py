#!/usr/bin/env python3
"""Build data/uci/ecoli.arff: the im-vs-rest binarization of UCI ecoli.

The UCI protein-localization data (336 instances, 7 numeric features) is
commonly distributed both with the original 8 localization-site classes and
as the binary 'ecoli1' variant (KEEL naming) that labels the 77 'im'
instances positive and everything else negative, keeping the original row
order. The evaluation targets reproduce only on the binary variant, so that
is the file shipped here.

Usage: build_ecoli_arff.py CANONICAL_ECOLI_ARFF OUT_ARFF
  CANONICAL_ECOLI_ARFF: the 8-class conversion (class values
  cp,im,pp,imU,om,omL,imL,imS, class last).
"""

import sys


def main(src_path, out_path):
    sys.path.insert(0, "src")
    from arffmine import load_arff, write_arff
    from arffmine.data import Attribute, Dataset, NOMINAL

    ds = load_arff(src_path)
    if ds.n_instances != 336:
        raise SystemExit(f"expected 336 instances, got {ds.n_instances}")
    vals = ds.class_attribute.values
    X = ds.X.copy()
    X[:, ds.class_index] = [0 if vals[int(c)] == "im" else 1
                            for c in ds.X[:, ds.class_index]]
    attrs = list(ds.attributes[:-1]) + [
        Attribute("class", NOMINAL, ds.class_index, ("positive", "negative"))]
    out = Dataset("ecoli", attrs, X)
    with open(out_path, "w") as fh:
        fh.write("% UCI ecoli (protein localization sites), im-vs-rest binarization\n")
        fh.write("% 336 instances, 7 numeric attributes, positive = 'im' (77)\n")
        fh.write(write_arff(out))
    print(f"wrote {out_path}: {out.n_instances} instances")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    main(*sys.argv[1:3])
