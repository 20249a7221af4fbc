"""Apriori frequent-itemset and association-rule mining over nominal data.

Items are attribute=value pairs; the class attribute participates like any
other attribute and missing cells contribute no item.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .data import NOMINAL, Dataset
from .runtime import checkpoint


@dataclass(frozen=True)
class ItemsetRule:
    antecedent: tuple          # of (attribute name, value) pairs
    consequent: tuple
    support: float
    confidence: float

    def render(self):
        def side(items):
            return " & ".join(f"{a}={v}" for a, v in items)
        return (f"{side(self.antecedent)} => {side(self.consequent)} "
                f"(support {self.support:.4f}, confidence {self.confidence:.4f})")


def _transactions(ds: Dataset):
    for j in range(ds.n_attributes):
        if ds.attributes[j].kind != NOMINAL:
            raise ValueError(
                f"association mining needs nominal attributes; "
                f"{ds.attributes[j].name!r} is {ds.attributes[j].kind}")
    out = []
    for i in range(ds.n_instances):
        row = ds.X[i]
        out.append(frozenset(
            (j, int(row[j])) for j in range(ds.n_attributes) if not np.isnan(row[j])))
    return out


def frequent_itemsets(ds: Dataset, min_support: float = 0.1, ctx=None) -> dict:
    """Level-wise mining with prefix join and subset pruning.

    Returns {itemset (frozenset of (attr, value)): absolute count}.
    """
    if min_support <= 0:
        raise ValueError("min_support must be positive")
    transactions = _transactions(ds)
    n = len(transactions)
    threshold = min_support * n - 1e-9

    counts = {}
    for t in transactions:
        for item in t:
            counts[item] = counts.get(item, 0) + 1
    frequent = {frozenset([i]): c for i, c in counts.items() if c >= threshold}
    result = dict(frequent)

    level = {tuple(sorted(s)) for s in frequent}
    k = 2
    while level:
        checkpoint(ctx)
        ordered = sorted(level)
        candidates = set()
        for a, b in combinations(ordered, 2):
            if a[:-1] == b[:-1]:
                cand = tuple(sorted(set(a) | set(b)))
                if len(cand) == k:
                    # prune: every (k-1)-subset must be frequent
                    if all(tuple(sorted(set(cand) - {item})) in level for item in cand):
                        candidates.add(cand)
        if not candidates:
            break
        cand_sets = {c: frozenset(c) for c in candidates}
        cand_counts = dict.fromkeys(candidates, 0)
        for t in transactions:
            for c, cs in cand_sets.items():
                if cs <= t:
                    cand_counts[c] += 1
        level = set()
        for c, count in cand_counts.items():
            if count >= threshold:
                level.add(c)
                result[cand_sets[c]] = count
        k += 1
    return result


def mine_apriori(ds: Dataset, min_support: float = 0.1, min_confidence: float = 0.9,
                 max_rules: int = 10, ctx=None) -> list[ItemsetRule]:
    """Rules from the frequent itemsets, sorted by confidence desc, support
    desc, then lexicographic rendering, truncated to max_rules."""
    freq = frequent_itemsets(ds, min_support, ctx=ctx)
    n = ds.n_instances

    def name_value(item):
        j, v = item
        return (ds.attributes[j].name, ds.attributes[j].values[v])

    rules = []
    for itemset, count in freq.items():
        if len(itemset) < 2:
            continue
        items = sorted(itemset)
        for r in range(1, len(items)):
            for antecedent in combinations(items, r):
                a_set = frozenset(antecedent)
                conf = count / freq[a_set]
                if conf >= min_confidence - 1e-12:
                    consequent = tuple(i for i in items if i not in a_set)
                    rules.append(ItemsetRule(
                        tuple(name_value(i) for i in antecedent),
                        tuple(name_value(i) for i in consequent),
                        count / n, conf))
    rules.sort(key=lambda r: (-r.confidence, -r.support,
                              r.antecedent, r.consequent))
    return rules[:max_rules]


def describe_rules(rules) -> str:
    if not rules:
        return "no rules found"
    return "\n".join(f"{i + 1}. {r.render()}" for i, r in enumerate(rules))
