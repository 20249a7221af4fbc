"""Load an ARFF dataset and inspect it.

The parser understands the classic ARFF grammar: case-insensitive keywords,
'%' comment lines, quoted tokens, '?' for missing cells and numeric/nominal/
string attribute types. The class attribute defaults to the last one.
"""

import pathlib

from arffmine import load_arff, set_class_index, summarize, write_arff

DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "uci"

ds = load_arff(DATA / "mushroom.arff")
print(f"relation {ds.relation!r}: {ds.n_instances} instances, "
      f"{ds.n_attributes} attributes, class = {ds.class_attribute.name!r}")

summary = summarize(ds)
for attr in summary.attributes[:6]:
    print(f"  {attr.name:28s} {attr.kind:8s} distinct={attr.distinct:3d} "
          f"missing={attr.missing}")
print("  ...")
print("class distribution:", summary.class_distribution)

# the class attribute can be re-pointed at any attribute without copying data
alt = set_class_index(ds, 0)
print(f"\nalternate class attribute: {alt.class_attribute.name!r}")

# datasets round-trip through the writer
text = write_arff(ds)
print(f"\nserialized back to {len(text.splitlines())} ARFF lines")
