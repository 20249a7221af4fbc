"""Clustering and association-rule mining on nominal data."""

import pathlib

from arffmine import load_arff, mine_apriori, train_farthest_first, train_kmeans

DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "uci"

ecoli = load_arff(DATA / "ecoli.arff")
km = train_kmeans(ecoli, k=3, seed=1)
print(km.describe())
ff = train_farthest_first(ecoli, k=3, seed=1)
print(f"\nfarthest-first sizes: {ff.sizes} (centers are data points)")

# association rules over the all-nominal car dataset; the class attribute
# participates as an ordinary item
car = load_arff(DATA / "car.arff")
rules = mine_apriori(car, min_support=0.2, min_confidence=0.95, max_rules=8)
print("\ncar evaluation rules (support >= 0.2, confidence >= 0.95):")
for i, rule in enumerate(rules, 1):
    print(f"{i}. {rule.render()}")
