"""The three forest builders side by side.

- randomforest: bootstrap samples + per-node random attribute subspaces.
- sysfor: one tree per "good" attribute (root gain ratio within a threshold
  of the best) forced as root, extended with second-level alternatives when
  the good set is smaller than the requested forest.
- forestpa: sequential bootstrap trees where attributes used near the root
  of the latest tree are penalized ((d+1)/(d+2) at depth d) and recover
  linearly over the next trees, steering later trees toward fresh attributes.
"""

import pathlib

from arffmine import load_arff
from arffmine.engine import AlgorithmSpec, execute_spec
from arffmine.forests import good_attributes, train_forest_pa

DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "uci"
soybean = load_arff(DATA / "soybean.arff")

for algo in ["randomforest", "sysfor", "forestpa"]:
    doc = execute_spec(AlgorithmSpec(algo, {"num_trees": 10}, seed=1), soybean)
    print(f"{algo:14s} 10-fold accuracy: {doc['accuracy']:.4f} "
          f"(build {doc['build_time_s']:.2f}s)")

goods = good_attributes(soybean, 0.3)
print(f"\nsysfor good attributes (within 30% of the best root gain ratio): "
      f"{[soybean.attributes[j].name for j in goods]}")

forest = train_forest_pa(soybean, num_trees=4, recovery_trees=3, seed=1)
print("\nforestpa attribute weights after each tree (penalized ones):")
for t, snap in enumerate(forest.weight_snapshots):
    penalized = {soybean.attributes[a].name: round(float(w), 3)
                 for a, w in enumerate(snap) if w < 1.0}
    print(f"  tree {t}: {penalized}")
