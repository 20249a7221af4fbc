"""Ensemble learners: random forest, systematic forest, attribute-penalty forest."""

from __future__ import annotations

import math

import numpy as np

from .data import Dataset
from .runtime import checkpoint
from .trees import (
    MISSING_LARGEST,
    InfoGainGrower,
    TreeModel,
    _C45Grower,
    train_c45,
)


def bootstrap_sample(ds: Dataset, seed: int) -> Dataset:
    """N seeded draws with replacement."""
    if ds.n_instances == 0:
        raise ValueError("cannot bootstrap an empty dataset")
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, ds.n_instances, ds.n_instances)
    return ds.subset(rows)


class ForestModel:
    """Members vote with averaged class distributions; argmax breaks ties low."""

    def __init__(self, members, member_seeds, ds: Dataset, algorithm, params):
        if not members:
            raise ValueError("a forest needs at least one member")
        self.members = members
        self.member_seeds = list(member_seeds)
        self.class_labels = ds.class_attribute.values
        self.attributes = ds.attributes
        self.algorithm = algorithm
        self.params = dict(params)

    def predict_proba(self, row):
        acc = np.zeros(len(self.class_labels))
        for m in self.members:
            acc = acc + m.predict_proba(row)
        return acc / len(self.members)

    def describe(self):
        lines = [f"{self.algorithm}: {len(self.members)} trees"]
        for i, (m, s) in enumerate(zip(self.members, self.member_seeds)):
            lines.append(f"--- tree {i} (seed {s}) ---")
            lines.append(m.describe())
        return "\n".join(lines)


def train_random_forest(ds: Dataset, num_trees: int = 10, subspace: int | None = None,
                        seed: int = 1, bootstrap: bool = True, ctx=None) -> ForestModel:
    """Unpruned info-gain trees on bootstrap samples, each node evaluating a
    seeded random subspace of attributes (default ceil(sqrt(M)))."""
    n_features = len(ds.feature_indices())
    if n_features == 0:
        raise ValueError("no feature attributes to train on")
    if subspace is None:
        subspace = max(1, math.ceil(math.sqrt(n_features)))
    members = []
    seeds = []
    for t in range(num_trees):
        checkpoint(ctx)
        member_seed = seed + t
        sample = bootstrap_sample(ds, member_seed) if bootstrap else ds
        rng = np.random.default_rng([seed, t, 1])
        grower = InfoGainGrower(sample, min_leaf=1, subspace=subspace, rng=rng)
        root = grower.grow()
        members.append(TreeModel(root, sample, "randomforest-member",
                                 {"seed": member_seed}, MISSING_LARGEST))
        seeds.append(member_seed)
    return ForestModel(members, seeds, ds, "randomforest",
                       {"num_trees": num_trees, "subspace": subspace,
                        "seed": seed, "bootstrap": bootstrap})


# ---------------------------------------------------------------------------
# Systematic forest: distinct high-gain-ratio attributes forced as roots
# ---------------------------------------------------------------------------

def _root_gain_ratios(ds: Dataset):
    """Usable root candidates as (ratio, attribute), best first."""
    grower = _C45Grower(ds, confidence=0.25, min_leaf=2)
    rows = np.arange(ds.n_instances)
    weights = np.ones(len(rows))
    dist = np.bincount(grower.codes, minlength=grower.n_classes).astype(float)
    scored = []
    for j in grower.features:
        cand = grower._candidate(j, rows, weights, dist)
        if cand is not None and cand.gain > 1e-12:
            scored.append((cand.ratio, j))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return scored


def good_attributes(ds: Dataset, goodness_threshold: float = 0.3):
    """Attributes whose root gain ratio is within the threshold of the best."""
    scored = _root_gain_ratios(ds)
    if not scored:
        return []
    best = scored[0][0]
    return [j for r, j in scored if r >= (1.0 - goodness_threshold) * best]


def _subtree_rows(model: TreeModel, ds: Dataset, branch: int):
    """Training rows and fractional weights routed into one root branch."""
    root = model.root
    rows = np.arange(ds.n_instances)
    weights = np.ones(len(rows))
    col = ds.X[rows, root.attribute]
    known = ~np.isnan(col)
    ids = np.full(len(rows), -1, dtype=np.intp)
    if root.kind == "nominal":
        ids[known] = col[known].astype(np.intp)
    else:
        ids[known] = np.where(col[known] <= root.threshold, 0, 1)
    known_w = root.branch_weights.sum()
    frac = root.branch_weights[branch] / known_w if known_w > 0 else 0.0
    mask = ids == branch
    if frac > 0 and (~known).any():
        return (np.concatenate([rows[mask], rows[~known]]),
                np.concatenate([weights[mask], weights[~known] * frac]))
    return rows[mask], weights[mask]


def train_sysfor(ds: Dataset, num_trees: int = 10, goodness_threshold: float = 0.3,
                 seed: int = 1, ctx=None) -> ForestModel:
    """One C4.5-style tree per good attribute forced as root; when the good
    set is smaller than num_trees, extends with second-level alternatives by
    re-rooting each tree's largest child on the next-best good attribute
    found at that child."""
    goods = good_attributes(ds, goodness_threshold)
    if not goods:
        raise ValueError("no usable attribute to root a tree")

    members = []
    for j in goods[:num_trees]:
        checkpoint(ctx)
        members.append(train_c45(ds, forced={(): j}))

    if len(members) < num_trees:
        base_count = len(members)
        # per base tree: ranked alternative attributes at its largest child
        alternatives = []
        for m in members[:base_count]:
            root = m.root
            if root.is_leaf:
                alternatives.append([])
                continue
            branch = int(np.argmax([c.dist.sum() for c in root.children]))
            rows, weights = _subtree_rows(m, ds, branch)
            child_ds = ds.subset(rows)
            try:
                local = good_attributes(child_ds, goodness_threshold)
            except ValueError:
                local = []
            used = root.children[branch].attribute
            alternatives.append(
                [(branch, a) for a in local if a != used and a != root.attribute])

        rank = 0
        while len(members) < num_trees:
            added = False
            for i in range(base_count):
                if len(members) >= num_trees:
                    break
                if rank < len(alternatives[i]):
                    checkpoint(ctx)
                    branch, alt = alternatives[i][rank]
                    forced = {(): members[i].root.attribute, (branch,): alt}
                    members.append(train_c45(ds, forced=forced))
                    added = True
            if not added:
                break
            rank += 1

    seeds = [seed] * len(members)
    return ForestModel(members, seeds, ds, "sysfor",
                       {"num_trees": num_trees,
                        "goodness_threshold": goodness_threshold, "seed": seed})


# ---------------------------------------------------------------------------
# Attribute-penalty forest: sequential trees with depth-based merit penalties
# ---------------------------------------------------------------------------

class AttributeWeights:
    """Per-attribute merit multipliers in (0, 1] with linear recovery.

    An attribute tested at minimum depth d in the latest tree drops to
    (d+1)/(d+2) and climbs back by a fixed per-tree increment, reaching 1
    exactly after the recovery horizon.
    """

    def __init__(self, n_attributes, recovery_trees):
        self.eta = recovery_trees
        self.weights = np.ones(n_attributes)
        self.cooldown = np.zeros(n_attributes, dtype=np.intp)
        self.increment = np.zeros(n_attributes)

    def update(self, used_depths: dict):
        """Apply one tree's outcome: recover idle attributes, penalize used ones."""
        for a in range(len(self.weights)):
            if a in used_depths:
                d = used_depths[a]
                self.weights[a] = (d + 1) / (d + 2)
                if self.eta > 0:
                    self.cooldown[a] = self.eta
                    self.increment[a] = (1.0 - self.weights[a]) / self.eta
                else:
                    self.cooldown[a] = 0
                    self.weights[a] = 1.0
            elif self.cooldown[a] > 0:
                self.weights[a] = min(1.0, self.weights[a] + self.increment[a])
                self.cooldown[a] -= 1
                if self.cooldown[a] == 0:
                    self.weights[a] = 1.0


def train_forest_pa(ds: Dataset, num_trees: int = 10, recovery_trees: int = 3,
                    seed: int = 1, ctx=None) -> ForestModel:
    """Sequential bootstrap trees; every attribute is tested at every node,
    with split merit scaled by the current attribute weight."""
    state = AttributeWeights(ds.n_attributes, recovery_trees)
    members = []
    seeds = []
    snapshots = []
    for t in range(num_trees):
        checkpoint(ctx)
        member_seed = seed + t
        sample = bootstrap_sample(ds, member_seed)
        grower = InfoGainGrower(sample, min_leaf=2, attr_weights=state.weights)
        root = grower.grow()
        members.append(TreeModel(root, sample, "forestpa-member",
                                 {"seed": member_seed}, MISSING_LARGEST))
        seeds.append(member_seed)
        state.update(grower.attributes_used)
        snapshots.append(state.weights.copy())
    model = ForestModel(members, seeds, ds, "forestpa",
                        {"num_trees": num_trees, "recovery_trees": recovery_trees,
                         "seed": seed})
    model.attribute_weights = state
    model.weight_snapshots = snapshots
    return model
