"""Single-tree learners: C4.5-style, reduced-error-pruned, and CART with
split-point and node-attribute sampling.

All trees share the TreeNode/TreeModel structures. Leaves keep their raw
training class-weight distribution plus a normalized prediction distribution
(zero-weight structural leaves fall back to their parent's majority).
"""

from __future__ import annotations

import math
from statistics import NormalDist

import numpy as np

from .data import NOMINAL, NUMERIC, Dataset
from .splits import (
    entropy,
    rank_even_subset,
    scan_thresholds,
    sorted_class_cumulants,
)

SPLIT_NOMINAL = "nominal"    # one child per declared value
SPLIT_NUMERIC = "numeric"    # x <= t / x > t
SPLIT_EQUALS = "equals"      # x == v / x != v

MISSING_FRACTION = "fraction"  # spread over branches by branch weight
MISSING_LARGEST = "largest"    # follow the heaviest branch


class TreeNode:
    __slots__ = ("attribute", "kind", "threshold", "value", "children",
                 "dist", "pred_dist", "branch_weights")

    def __init__(self, dist, pred_dist):
        self.attribute = None
        self.kind = None
        self.threshold = None
        self.value = None
        self.children = None
        self.dist = dist
        self.pred_dist = pred_dist
        self.branch_weights = None

    @property
    def is_leaf(self):
        return self.children is None

    @property
    def prediction(self):
        return int(np.argmax(self.pred_dist))

    def make_leaf(self):
        self.attribute = None
        self.kind = None
        self.threshold = None
        self.value = None
        self.children = None
        self.branch_weights = None

    def branch_of(self, value):
        """Child index for a non-missing attribute value."""
        if self.kind == SPLIT_NOMINAL:
            return int(value)
        if self.kind == SPLIT_NUMERIC:
            return 0 if value <= self.threshold else 1
        return 0 if value == self.value else 1

    def edge_label(self, branch, attr):
        if self.kind == SPLIT_NOMINAL:
            return f"= {attr.values[branch]}"
        if self.kind == SPLIT_NUMERIC:
            return f"<= {self.threshold:g}" if branch == 0 else f"> {self.threshold:g}"
        v = attr.values[int(self.value)]
        return f"= {v}" if branch == 0 else f"!= {v}"


class TreeModel:
    def __init__(self, root, ds: Dataset, algorithm, params, missing_policy):
        self.root = root
        self.class_labels = ds.class_attribute.values
        self.attributes = ds.attributes
        self.class_index = ds.class_index
        self.algorithm = algorithm
        self.params = dict(params)
        self.missing_policy = missing_policy
        self.node_count, self.depth = _measure(root)

    def predict_proba(self, row):
        dist = _route(self.root, row, self.missing_policy)
        total = dist.sum()
        return dist / total if total > 0 else dist

    def describe(self):
        return render_tree(self)

    def leaves(self):
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(node.children)
        return out


def _measure(node):
    count = 1
    depth = 0
    if not node.is_leaf:
        for child in node.children:
            c, d = _measure(child)
            count += c
            depth = max(depth, d + 1)
    return count, depth


def _route(node, row, policy):
    if node.is_leaf:
        return node.pred_dist
    v = row[node.attribute]
    if math.isnan(v):
        if policy == MISSING_FRACTION:
            total = node.branch_weights.sum()
            if total <= 0:
                return node.pred_dist
            acc = np.zeros_like(node.pred_dist)
            for b, child in enumerate(node.children):
                w = node.branch_weights[b]
                if w > 0:
                    acc = acc + (w / total) * _route(child, row, policy)
            return acc
        return _route(node.children[int(np.argmax(node.branch_weights))], row, policy)
    return _route(node.children[node.branch_of(v)], row, policy)


def tree_predict(model: TreeModel, row) -> np.ndarray:
    row = np.asarray(row, dtype=np.float64)
    if row.shape[0] != len(model.attributes):
        raise ValueError("instance does not match the training schema")
    return model.predict_proba(row)


def render_tree(model: TreeModel) -> str:
    """Deterministic indented rendering, exactly one line per node."""
    lines = []

    def fmt_dist(dist):
        return "[" + ", ".join(f"{x:g}" for x in dist) + "]"

    def node_text(node):
        if node.is_leaf:
            return f"{model.class_labels[node.prediction]} {fmt_dist(node.dist)}"
        return f"{model.attributes[node.attribute].name}?"

    def walk(node, prefix, edge):
        label = f"{edge}: " if edge else ""
        lines.append(f"{prefix}{label}{node_text(node)}")
        if not node.is_leaf:
            attr = model.attributes[node.attribute]
            for b, child in enumerate(node.children):
                walk(child, prefix + "  ", node.edge_label(b, attr))

    walk(model.root, "", "")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Shared growth helpers
# ---------------------------------------------------------------------------

def _wcount(codes, weights, n_classes):
    if len(codes) == 0:
        return np.zeros(n_classes)
    return np.bincount(codes, weights=weights, minlength=n_classes).astype(np.float64)


def _leaf(dist, parent_pred):
    total = dist.sum()
    pred = dist / total if total > 0 else parent_pred
    return TreeNode(dist, pred)


def _check_tree_input(ds: Dataset):
    if ds.class_attribute.kind != NOMINAL:
        raise ValueError("class attribute must be nominal")
    if ds.n_instances == 0:
        raise ValueError("dataset has no instances")
    for j in ds.feature_indices():
        if ds.attributes[j].kind == "string":
            raise ValueError(f"string attribute {ds.attributes[j].name!r} is not supported")


class _Candidate:
    __slots__ = ("attribute", "kind", "threshold", "value", "gain", "ratio",
                 "branch_weights", "n_branches")

    def __init__(self, attribute, kind, gain, ratio, branch_weights,
                 threshold=None, value=None):
        self.attribute = attribute
        self.kind = kind
        self.gain = gain
        self.ratio = ratio
        self.branch_weights = branch_weights
        self.threshold = threshold
        self.value = value


# ---------------------------------------------------------------------------
# C4.5
# ---------------------------------------------------------------------------

def _add_errs(n, e, cf):
    """Pessimistic upper bound on additional errors for a leaf (n, e)."""
    if n <= 0:
        return 0.0
    if e < 1:
        base = n * (1 - cf ** (1 / n))
        if e == 0:
            return base
        return base + e * (_add_errs(n, 1, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = NormalDist().inv_cdf(1 - cf)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) \
        / (1 + z * z / n)
    return r * n - e


class _C45Grower:
    def __init__(self, ds: Dataset, confidence, min_leaf, forced=None):
        _check_tree_input(ds)
        self.ds = ds
        self.X = ds.X
        self.codes = ds.class_codes()
        self.n_classes = len(ds.class_attribute.values)
        self.features = ds.feature_indices()
        self.confidence = confidence
        self.min_leaf = min_leaf
        self.forced = forced or {}

    def grow(self):
        rows = np.arange(self.ds.n_instances)
        weights = np.ones(len(rows))
        dist = _wcount(self.codes[rows], weights, self.n_classes)
        root = self._grow(rows, weights, dist, dist / dist.sum(), path=())
        self._prune(root, is_root=True)
        return root

    def _grow(self, rows, weights, dist, parent_pred, path):
        node = _leaf(dist, parent_pred)
        total = dist.sum()
        if total <= 0 or np.count_nonzero(dist) <= 1 or total < 2 * self.min_leaf:
            return node

        forced_attr = self.forced.get(path)
        if forced_attr is not None:
            best = self._candidate(forced_attr, rows, weights, dist)
            if best is None:
                return node
        else:
            candidates = []
            for j in self.features:
                cand = self._candidate(j, rows, weights, dist)
                if cand is not None:
                    candidates.append(cand)
            if not candidates:
                return node
            avg_gain = sum(c.gain for c in candidates) / len(candidates)
            best = None
            for cand in candidates:
                if cand.gain >= avg_gain - 1e-3:
                    if best is None or cand.ratio > best.ratio:
                        best = cand
            if best is None or best.gain <= 1e-12:
                return node

        self._attach(node, best)
        col = self.X[rows, best.attribute]
        known = ~np.isnan(col)
        branch_ids = np.full(len(rows), -1, dtype=np.intp)
        if best.kind == SPLIT_NOMINAL:
            branch_ids[known] = col[known].astype(np.intp)
        else:
            branch_ids[known] = np.where(col[known] <= best.threshold, 0, 1)

        known_w = best.branch_weights.sum()
        node_pred = dist / total
        children = []
        for b in range(len(best.branch_weights)):
            in_branch = branch_ids == b
            frac = best.branch_weights[b] / known_w if known_w > 0 else 0.0
            if frac > 0 and (~known).any():
                b_rows = np.concatenate([rows[in_branch], rows[~known]])
                b_weights = np.concatenate([weights[in_branch], weights[~known] * frac])
            else:
                b_rows = rows[in_branch]
                b_weights = weights[in_branch]
            b_dist = _wcount(self.codes[b_rows], b_weights, self.n_classes)
            if b_dist.sum() <= 0:
                children.append(_leaf(b_dist, node_pred))
            else:
                children.append(self._grow(b_rows, b_weights, b_dist, node_pred,
                                           path + (b,)))
        node.children = children
        return node

    def _attach(self, node, cand):
        node.attribute = cand.attribute
        node.kind = cand.kind
        node.threshold = cand.threshold
        node.value = cand.value
        node.branch_weights = cand.branch_weights

    def _candidate(self, j, rows, weights, dist):
        attr = self.ds.attributes[j]
        col = self.X[rows, j]
        known = ~np.isnan(col)
        w_known = weights[known]
        total_known = w_known.sum()
        total = dist.sum()
        if total_known <= 0:
            return None
        known_frac = total_known / total
        missing_w = total - total_known
        codes = self.codes[rows][known]

        if attr.kind == NOMINAL:
            n_values = len(attr.values)
            vals = col[known].astype(np.intp)
            branch_w = np.bincount(vals, weights=w_known, minlength=n_values)
            positive = branch_w > 0
            if positive.sum() < 2 or (branch_w[positive] < self.min_leaf).any():
                return None
            table = np.zeros((n_values, self.n_classes))
            np.add.at(table, (vals, codes), w_known)
            h_known = entropy(table.sum(axis=0))
            h_branches = 0.0
            for v in range(n_values):
                bw = branch_w[v]
                if bw > 0:
                    h_branches += (bw / total_known) * entropy(table[v])
            gain = known_frac * (h_known - h_branches)
            ratio = _ratio_with_missing(gain, branch_w, missing_w, total)
            if ratio is None:
                return None
            return _Candidate(j, SPLIT_NOMINAL, gain, ratio, branch_w)

        # numeric: thresholds at midpoints, per-side minimum bucket weight
        sv, cum, boundaries = sorted_class_cumulants(
            col[known], codes, self.n_classes, w_known)
        if boundaries.size == 0:
            return None
        min_split = 0.1 * total_known / self.n_classes
        min_split = min(max(min_split, self.min_leaf), 25.0)
        lw = cum[boundaries].sum(axis=1)
        rw = total_known - lw
        ok = (lw >= min_split) & (rw >= min_split)
        boundaries = boundaries[ok]
        if boundaries.size == 0:
            return None
        scores, thresholds = scan_thresholds(sv, cum, boundaries, "infogain")
        gains = known_frac * scores - math.log2(boundaries.size) / total
        best = int(np.argmax(gains))
        i = boundaries[best]
        left = cum[i]
        right = cum[-1] - left
        branch_w = np.array([left.sum(), right.sum()])
        gain = float(gains[best])
        ratio = _ratio_with_missing(gain, branch_w, missing_w, total)
        if ratio is None:
            return None
        return _Candidate(j, SPLIT_NUMERIC, gain, ratio, branch_w,
                          threshold=float(thresholds[best]))

    def _prune(self, node, is_root=False):
        if node.is_leaf:
            return _leaf_est_errors(node.dist, self.confidence)
        subtree_est = 0.0
        for child in node.children:
            subtree_est += self._prune(child)
        leaf_est = _leaf_est_errors(node.dist, self.confidence)
        if not is_root and leaf_est <= subtree_est + 0.1:
            node.make_leaf()
            return leaf_est
        return subtree_est


def _leaf_est_errors(dist, cf):
    total = float(dist.sum())
    if total <= 0:
        return 0.0
    err = total - float(dist.max())
    return err + _add_errs(total, err, cf)


def _ratio_with_missing(gain, branch_w, missing_w, total):
    chunks = branch_w[branch_w > 0]
    if missing_w > 0:
        chunks = np.append(chunks, missing_w)
    p = chunks / total
    si = float(-(p * np.log2(p)).sum())
    if si <= 0:
        return None
    return gain / si


def train_c45(ds: Dataset, confidence: float = 0.25, min_leaf: int = 2,
              ctx=None, forced=None) -> TreeModel:
    """Gain-ratio tree with fractional missing-value weights and pessimistic
    subtree-replacement pruning. Candidate splits must beat the mean info
    gain of the usable candidates, and every populated branch must carry at
    least min_leaf weight."""
    grower = _C45Grower(ds, confidence, min_leaf, forced=forced)
    root = grower.grow()
    return TreeModel(root, ds, "c45",
                     {"confidence": confidence, "min_leaf": min_leaf},
                     MISSING_FRACTION)


# ---------------------------------------------------------------------------
# Info-gain grower shared by REPTree and the forest members
# ---------------------------------------------------------------------------

class InfoGainGrower:
    """Multiway-nominal / binary-numeric splits by plain information gain.

    Supports per-node attribute subspaces (random forests), per-attribute
    merit multipliers (penalty-weighted forests), instance weights and both
    missing-value policies (heaviest branch, or fractional spreading).
    """

    def __init__(self, ds: Dataset, min_leaf=2, subspace=None, rng=None,
                 attr_weights=None, missing=MISSING_LARGEST):
        _check_tree_input(ds)
        self.ds = ds
        self.X = ds.X
        self.codes = ds.class_codes()
        self.n_classes = len(ds.class_attribute.values)
        self.features = ds.feature_indices()
        self.min_leaf = min_leaf
        self.subspace = subspace
        self.rng = rng
        self.attr_weights = attr_weights
        self.missing = missing
        self.attributes_used = {}    # attribute -> minimum depth seen

    def grow(self, rows=None):
        if rows is None:
            rows = np.arange(self.ds.n_instances)
        rows = np.asarray(rows, dtype=np.intp)
        weights = np.ones(len(rows))
        dist = _wcount(self.codes[rows], weights, self.n_classes)
        if dist.sum() <= 0:
            raise ValueError("cannot grow a tree from an empty subset")
        return self._grow(rows, weights, dist, dist / dist.sum(), depth=0)

    def _grow(self, rows, weights, dist, parent_pred, depth):
        node = _leaf(dist, parent_pred)
        total = dist.sum()
        if np.count_nonzero(dist) <= 1 or total < 2 * self.min_leaf:
            return node

        features = self.features
        if self.subspace is not None and self.subspace < len(features):
            picked = self.rng.choice(len(features), size=self.subspace, replace=False)
            features = [features[i] for i in sorted(picked)]

        best = None
        for j in features:
            cand = self._candidate(j, rows, weights)
            if cand is None:
                continue
            merit = cand.gain
            if self.attr_weights is not None:
                merit = merit * self.attr_weights[j]
            if merit > 1e-12 and (best is None or merit > best[0]):
                best = (merit, cand)
        if best is None:
            return node
        cand = best[1]

        self.attributes_used.setdefault(cand.attribute, depth)
        if depth < self.attributes_used[cand.attribute]:
            self.attributes_used[cand.attribute] = depth

        node.attribute = cand.attribute
        node.kind = cand.kind
        node.threshold = cand.threshold
        node.branch_weights = cand.branch_weights

        col = self.X[rows, cand.attribute]
        known = ~np.isnan(col)
        branch_ids = np.full(len(rows), -1, dtype=np.intp)
        if cand.kind == SPLIT_NOMINAL:
            branch_ids[known] = col[known].astype(np.intp)
        else:
            branch_ids[known] = np.where(col[known] <= cand.threshold, 0, 1)

        known_w = cand.branch_weights.sum()
        node_pred = dist / total
        children = []
        for b in range(len(cand.branch_weights)):
            in_branch = branch_ids == b
            if self.missing == MISSING_FRACTION:
                frac = cand.branch_weights[b] / known_w if known_w > 0 else 0.0
                if frac > 0 and (~known).any():
                    b_rows = np.concatenate([rows[in_branch], rows[~known]])
                    b_weights = np.concatenate([weights[in_branch],
                                                weights[~known] * frac])
                else:
                    b_rows = rows[in_branch]
                    b_weights = weights[in_branch]
            else:
                if b == int(np.argmax(cand.branch_weights)):
                    in_branch = in_branch | ~known
                b_rows = rows[in_branch]
                b_weights = weights[in_branch]
            b_dist = _wcount(self.codes[b_rows], b_weights, self.n_classes)
            if b_dist.sum() <= 0:
                children.append(_leaf(b_dist, node_pred))
            else:
                children.append(self._grow(b_rows, b_weights, b_dist, node_pred,
                                           depth + 1))
        node.children = children
        return node

    def _candidate(self, j, rows, weights):
        attr = self.ds.attributes[j]
        col = self.X[rows, j]
        known = ~np.isnan(col)
        codes = self.codes[rows][known]
        if codes.size == 0:
            return None
        w = weights[known]

        if attr.kind == NOMINAL:
            n_values = len(attr.values)
            vals = col[known].astype(np.intp)
            branch_w = np.bincount(vals, weights=w, minlength=n_values)
            positive = branch_w > 0
            if positive.sum() < 2 or (branch_w[positive] < self.min_leaf).any():
                return None
            table = np.zeros((n_values, self.n_classes))
            np.add.at(table, (vals, codes), w)
            total_known = branch_w.sum()
            h_known = entropy(table.sum(axis=0))
            h_branches = 0.0
            for v in range(n_values):
                if branch_w[v] > 0:
                    h_branches += (branch_w[v] / total_known) * entropy(table[v])
            return _Candidate(j, SPLIT_NOMINAL, h_known - h_branches, 0.0, branch_w)

        sv, cum, boundaries = sorted_class_cumulants(col[known], codes,
                                                     self.n_classes, w)
        if boundaries.size == 0:
            return None
        lw = cum[boundaries].sum(axis=1)
        rw = cum[-1].sum() - lw
        ok = (lw >= self.min_leaf) & (rw >= self.min_leaf)
        boundaries = boundaries[ok]
        if boundaries.size == 0:
            return None
        scores, thresholds = scan_thresholds(sv, cum, boundaries, "infogain")
        best = int(np.argmax(scores))
        i = boundaries[best]
        left = cum[i]
        right = cum[-1] - left
        return _Candidate(j, SPLIT_NUMERIC, float(scores[best]), 0.0,
                          np.array([left.sum(), right.sum()]),
                          threshold=float(thresholds[best]))


# ---------------------------------------------------------------------------
# REPTree: info-gain growth + reduced-error pruning on a held-out fold
# ---------------------------------------------------------------------------

def train_rep_tree(ds: Dataset, prune_folds: int = 3, min_leaf: int = 2,
                   seed: int = 1, ctx=None) -> TreeModel:
    """Grows on (prune_folds-1)/prune_folds of the data and prunes bottom-up
    against the held-out fold: a subtree is replaced by a leaf whenever that
    does not increase held-out errors. The held-out distributions are then
    backfitted into the pruned tree so every instance informs the leaves."""
    _check_tree_input(ds)
    if ds.n_instances < prune_folds:
        raise ValueError(
            f"need at least {prune_folds} instances for {prune_folds}-fold pruning")
    from .evaluation import stratified_folds

    folds = stratified_folds(ds, prune_folds, seed)
    holdout = prune_folds - 1
    grow_rows = np.nonzero(folds != holdout)[0]
    prune_rows = np.nonzero(folds == holdout)[0]

    grower = InfoGainGrower(ds, min_leaf=min_leaf, missing=MISSING_FRACTION)
    root = grower.grow(grow_rows)
    codes = ds.class_codes()
    weights = np.ones(len(prune_rows))
    _rep_prune(root, ds, codes, np.asarray(prune_rows, dtype=np.intp), weights)
    _backfit(root, ds, codes, np.asarray(prune_rows, dtype=np.intp), weights)
    return TreeModel(root, ds, "reptree",
                     {"prune_folds": prune_folds, "min_leaf": min_leaf, "seed": seed},
                     MISSING_FRACTION)


def _route_fractional(node, ds, rows, weights):
    """Partition (rows, weights) over a node's children, spreading missing
    values across branches in proportion to the training branch weights."""
    col = ds.X[rows, node.attribute]
    known = ~np.isnan(col)
    branch_ids = np.full(len(rows), -1, dtype=np.intp)
    if node.kind == SPLIT_NOMINAL:
        branch_ids[known] = col[known].astype(np.intp)
    elif node.kind == SPLIT_NUMERIC:
        branch_ids[known] = np.where(col[known] <= node.threshold, 0, 1)
    else:
        branch_ids[known] = np.where(col[known] == node.value, 0, 1)
    known_w = node.branch_weights.sum()
    parts = []
    for b in range(len(node.children)):
        in_branch = branch_ids == b
        frac = node.branch_weights[b] / known_w if known_w > 0 else 0.0
        if frac > 0 and (~known).any():
            parts.append((np.concatenate([rows[in_branch], rows[~known]]),
                          np.concatenate([weights[in_branch], weights[~known] * frac])))
        else:
            parts.append((rows[in_branch], weights[in_branch]))
    return parts


def _rep_prune(node, ds, codes, rows, weights):
    """Returns weighted held-out errors of the (possibly pruned) subtree."""
    if len(rows):
        leaf_errors = float(weights[codes[rows] != node.prediction].sum())
    else:
        leaf_errors = 0.0
    if node.is_leaf:
        return leaf_errors
    subtree_errors = 0.0
    for child, (b_rows, b_weights) in zip(node.children,
                                          _route_fractional(node, ds, rows, weights)):
        subtree_errors += _rep_prune(child, ds, codes, b_rows, b_weights)
    if leaf_errors <= subtree_errors:
        node.make_leaf()
        return leaf_errors
    return subtree_errors


def _backfit(node, ds, codes, rows, weights):
    """Merge held-out class weights into every node along the routing paths."""
    added = _wcount(codes[rows], weights, len(node.dist))
    node.dist = node.dist + added
    total = node.dist.sum()
    if total > 0:
        node.pred_dist = node.dist / total
    if node.is_leaf:
        return
    parts = _route_fractional(node, ds, rows, weights)
    node.branch_weights = node.branch_weights + np.array(
        [float(w.sum()) for _, w in parts])
    for child, (b_rows, b_weights) in zip(node.children, parts):
        _backfit(child, ds, codes, b_rows, b_weights)


# ---------------------------------------------------------------------------
# CART with SPAARC's sampling optimizations
# ---------------------------------------------------------------------------

class _CartGrower:
    def __init__(self, ds: Dataset, split_sampling, max_points, attr_sampling,
                 min_leaf, seed):
        _check_tree_input(ds)
        self.ds = ds
        self.X = ds.X
        self.codes = ds.class_codes()
        self.n_classes = len(ds.class_attribute.values)
        self.features = ds.feature_indices()
        self.split_sampling = split_sampling
        self.max_points = max_points
        self.attr_sampling = attr_sampling
        self.min_leaf = min_leaf
        # seeded tie-break key used when parent gains rank attributes equally
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(self.features))
        self.tie_key = {j: int(order[i]) for i, j in enumerate(self.features)}
        self.subset_size = max(1, math.ceil(math.sqrt(len(self.features))))

    def grow(self):
        rows = np.arange(self.ds.n_instances)
        dist = _wcount(self.codes, np.ones(len(rows)), self.n_classes)
        return self._grow(rows, dist, dist / dist.sum(), depth=0, parent_gains=None)

    def _features_for(self, depth, parent_gains):
        if not self.attr_sampling or depth % 2 == 0 or parent_gains is None:
            return self.features
        ranked = sorted(self.features,
                        key=lambda j: (-parent_gains.get(j, -math.inf), self.tie_key[j]))
        return ranked[: self.subset_size]

    def _grow(self, rows, dist, parent_pred, depth, parent_gains):
        node = _leaf(dist, parent_pred)
        total = dist.sum()
        if np.count_nonzero(dist) <= 1 or total < 2 * self.min_leaf:
            return node

        gains = {}
        best = None
        for j in self._features_for(depth, parent_gains):
            cand = self._candidate(j, rows)
            if cand is None:
                continue
            gains[j] = cand.gain
            if cand.gain > 1e-12 and (best is None or cand.gain > best.gain):
                best = cand
        if best is None:
            return node

        node.attribute = best.attribute
        node.kind = best.kind
        node.threshold = best.threshold
        node.value = best.value
        node.branch_weights = best.branch_weights

        col = self.X[rows, best.attribute]
        known = ~np.isnan(col)
        branch_ids = np.empty(len(rows), dtype=np.intp)
        if best.kind == SPLIT_NUMERIC:
            branch_ids[known] = np.where(col[known] <= best.threshold, 0, 1)
        else:
            branch_ids[known] = np.where(col[known] == best.value, 0, 1)
        branch_ids[~known] = int(np.argmax(best.branch_weights))

        node_pred = dist / total
        children = []
        for b in (0, 1):
            b_rows = rows[branch_ids == b]
            b_dist = _wcount(self.codes[b_rows], np.ones(len(b_rows)), self.n_classes)
            if b_dist.sum() <= 0:
                children.append(_leaf(b_dist, node_pred))
            else:
                children.append(self._grow(b_rows, b_dist, node_pred, depth + 1, gains))
        node.children = children
        return node

    def _candidate(self, j, rows):
        attr = self.ds.attributes[j]
        col = self.X[rows, j]
        known = ~np.isnan(col)
        codes = self.codes[rows][known]
        if codes.size == 0:
            return None
        w = np.ones(codes.size)

        if attr.kind == NOMINAL:
            n_values = len(attr.values)
            vals = col[known].astype(np.intp)
            table = np.zeros((n_values, self.n_classes))
            np.add.at(table, (vals, codes), w)
            branch_w = table.sum(axis=1)
            total_known = branch_w.sum()
            parent = table.sum(axis=0)
            parent_gini = 1.0 - ((parent / total_known) ** 2).sum()
            best = None
            for v in range(n_values):
                in_w = branch_w[v]
                out_w = total_known - in_w
                if in_w < self.min_leaf or out_w < self.min_leaf:
                    continue
                inside = table[v]
                outside = parent - inside
                g_in = 1.0 - ((inside / in_w) ** 2).sum()
                g_out = 1.0 - ((outside / out_w) ** 2).sum()
                gain = parent_gini - (in_w / total_known) * g_in \
                    - (out_w / total_known) * g_out
                if best is None or gain > best[0]:
                    best = (gain, v, np.array([in_w, out_w]))
            if best is None:
                return None
            gain, v, branch_weights = best
            return _Candidate(j, SPLIT_EQUALS, float(gain), 0.0, branch_weights,
                              value=float(v))

        if self.split_sampling:
            return self._sampled_numeric_candidate(j, col[known], codes)
        sv, cum, boundaries = sorted_class_cumulants(col[known], codes,
                                                     self.n_classes, w)
        if boundaries.size == 0:
            return None
        lw = cum[boundaries].sum(axis=1)
        rw = cum[-1].sum() - lw
        ok = (lw >= self.min_leaf) & (rw >= self.min_leaf)
        boundaries = boundaries[ok]
        if boundaries.size == 0:
            return None
        scores, thresholds = scan_thresholds(sv, cum, boundaries, "gini")
        best = int(np.argmax(scores))
        i = boundaries[best]
        left = cum[i]
        right = cum[-1] - left
        return _Candidate(j, SPLIT_NUMERIC, float(scores[best]), 0.0,
                          np.array([left.sum(), right.sum()]),
                          threshold=float(thresholds[best]))

    def _sampled_numeric_candidate(self, j, values, codes):
        """Capped threshold scan: ranks are sampled across all distinct-value
        boundaries first, then counted per segment, so the per-node work is
        O(n + cap * classes) after the sort instead of O(n * classes)."""
        order = np.argsort(values, kind="stable")
        sv = values[order]
        sc = codes[order]
        boundaries = np.nonzero(sv[:-1] != sv[1:])[0]
        if boundaries.size == 0:
            return None
        picked = rank_even_subset(boundaries, self.max_points)

        # class counts per inter-boundary segment, then prefix sums
        seg = np.searchsorted(picked, np.arange(len(sv)), side="left")
        cls_seg = np.zeros((len(picked) + 1, self.n_classes))
        np.add.at(cls_seg, (seg, sc), 1.0)
        left = np.cumsum(cls_seg[:-1], axis=0)
        total = cls_seg.sum(axis=0)
        grand = float(total.sum())
        right = total[None, :] - left

        lw = left.sum(axis=1)
        rw = grand - lw
        ok = (lw >= self.min_leaf) & (rw >= self.min_leaf)
        if not ok.any():
            return None
        p = total / grand
        parent = 1.0 - float((p * p).sum())
        pl = left / lw[:, None]
        pr = right / np.where(rw > 0, rw, 1.0)[:, None]
        child = (lw / grand) * (1.0 - (pl * pl).sum(axis=1)) \
            + (rw / grand) * (1.0 - (pr * pr).sum(axis=1))
        scores = np.where(ok, parent - child, -np.inf)
        best = int(np.argmax(scores))
        if scores[best] <= 1e-12:
            return None
        i = picked[best]
        return _Candidate(j, SPLIT_NUMERIC, float(scores[best]), 0.0,
                          np.array([float(lw[best]), float(rw[best])]),
                          threshold=float((sv[i] + sv[i + 1]) / 2.0))


def train_cart_spaarc(ds: Dataset, split_sampling: bool = True, max_points: int = 20,
                      attr_sampling: bool = True, min_leaf: int = 2, seed: int = 1,
                      ctx=None) -> TreeModel:
    """Binary Gini tree; nominal attributes split one-value-vs-rest.

    split_sampling caps numeric threshold evaluation at max_points ranks;
    attr_sampling tests only the top ceil(sqrt(M)) attributes (ranked by the
    parent node's Gini gains, seeded tie-break) at odd depths. With both
    flags off this is the plain CART baseline.
    """
    grower = _CartGrower(ds, split_sampling, max_points, attr_sampling, min_leaf, seed)
    root = grower.grow()
    return TreeModel(root, ds, "spaarc",
                     {"split_sampling": split_sampling, "max_points": max_points,
                      "attr_sampling": attr_sampling, "min_leaf": min_leaf,
                      "seed": seed},
                     MISSING_LARGEST)
