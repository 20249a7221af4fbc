import math

import numpy as np
import pytest

from arffmine import parse_arff
from arffmine.data import Attribute, Dataset, NOMINAL, NUMERIC
from arffmine.evaluation import stratified_folds
from arffmine.trees import (
    MISSING_FRACTION,
    MISSING_LARGEST,
    InfoGainGrower,
    TreeModel,
    render_tree,
    train_c45,
    train_cart_spaarc,
    train_rep_tree,
    tree_predict,
)

PURE = "@relation p\n@attribute a {x,y}\n@attribute c {only}\n@data\nx,only\ny,only\nx,only\ny,only\n"


def oracle_c45_root(ds, min_leaf=2):
    """Exhaustive root scorer mirroring the documented candidate gate:
    mean-gain threshold over usable candidates, then max gain ratio."""
    codes = ds.class_codes()
    n_classes = len(ds.class_attribute.values)
    n = ds.n_instances
    cands = []
    for j in ds.feature_indices():
        attr = ds.attributes[j]
        col = ds.X[:, j]
        if attr.kind != NOMINAL:
            continue
        branch = []
        ok = True
        for v in range(len(attr.values)):
            mask = col == v
            counts = np.bincount(codes[mask], minlength=n_classes).astype(float)
            branch.append(counts)
        weights = [b.sum() for b in branch]
        positive = [w for w in weights if w > 0]
        if len(positive) < 2 or any(w < min_leaf for w in positive):
            continue

        def H(c):
            t = c.sum()
            p = c[c > 0] / t
            return float(-(p * np.log2(p)).sum()) if t > 0 else 0.0

        parent = np.bincount(codes, minlength=n_classes).astype(float)
        gain = H(parent) - sum((w / n) * H(b) for w, b in zip(weights, branch) if w > 0)
        sw = np.array([w for w in weights if w > 0]) / n
        split_info = float(-(sw * np.log2(sw)).sum())
        if split_info <= 0:
            continue
        cands.append((j, gain, gain / split_info))
    if not cands:
        return None
    avg = sum(g for _, g, _ in cands) / len(cands)
    eligible = [(j, g, r) for j, g, r in cands if g >= avg - 1e-3]
    return max(eligible, key=lambda t: (t[2], -t[0]))[0]


def leaf_weight_check(node, min_leaf, is_root=True):
    """Every instance-bearing leaf carries at least min_leaf weight."""
    if node.is_leaf:
        total = node.dist.sum()
        return is_root or total == 0 or total >= min_leaf - 1e-9
    return all(leaf_weight_check(c, min_leaf, False) for c in node.children)


def distribution_sums_check(node, tol=1e-6):
    if node.is_leaf:
        return True
    child_sum = sum(c.dist for c in node.children)
    if not np.allclose(child_sum, node.dist, atol=tol):
        return False
    return all(distribution_sums_check(c, tol) for c in node.children)


def count_nodes(node):
    if node.is_leaf:
        return 1
    return 1 + sum(count_nodes(c) for c in node.children)


class TestC45:
    def test_pure_dataset_single_leaf(self):
        model = train_c45(parse_arff(PURE))
        assert model.root.is_leaf
        assert model.node_count == 1

    def test_weather_root_matches_exhaustive_oracle(self, weather):
        model = train_c45(weather)
        assert not model.root.is_leaf
        assert model.root.attribute == oracle_c45_root(weather)

    def test_weather_tree_shape(self, weather):
        # the classic result: outlook root, humidity under sunny, windy under rainy
        model = train_c45(weather)
        names = [a.name for a in weather.attributes]
        assert names[model.root.attribute] == "outlook"
        sunny, overcast, rainy = model.root.children
        assert names[sunny.attribute] == "humidity"
        assert overcast.is_leaf
        assert names[rainy.attribute] == "windy"

    def test_distribution_sums(self, weather, weather_numeric):
        for ds in (weather, weather_numeric):
            model = train_c45(ds)
            assert distribution_sums_check(model.root)

    def test_fractional_missing_weights(self):
        text = ("@relation t\n@attribute a {x,y}\n@attribute c {p,q}\n@data\n" +
                "x,p\n" * 6 + "y,q\n" * 3 + "?,p\n")
        ds = parse_arff(text)
        model = train_c45(ds, min_leaf=2)
        assert not model.root.is_leaf
        # the missing instance spreads 6/9 and 3/9 over the two branches
        left, right = model.root.children
        assert left.dist.sum() == pytest.approx(6 + 6 / 9)
        assert right.dist.sum() == pytest.approx(3 + 3 / 9)
        assert distribution_sums_check(model.root)

    def test_min_leaf_honored(self, weather, weather_numeric):
        for ds in (weather, weather_numeric):
            for min_leaf in (2, 3, 5):
                model = train_c45(ds, min_leaf=min_leaf)
                assert leaf_weight_check(model.root, min_leaf)

    def test_unpruned_training_accuracy_at_least_pruned(self, weather_numeric):
        ds = weather_numeric
        codes = ds.class_codes()

        def train_accuracy(model):
            hits = sum(int(np.argmax(model.predict_proba(ds.X[i]))) == codes[i]
                       for i in range(ds.n_instances))
            return hits / ds.n_instances

        pruned = train_c45(ds, confidence=0.25)
        # near-1 confidence estimates almost no extra error: nothing prunes
        unpruned = train_c45(ds, confidence=0.4999)
        assert train_accuracy(unpruned) >= train_accuracy(pruned) - 1e-12

    def test_numeric_class_rejected(self):
        ds = parse_arff("@relation t\n@attribute a {x,y}\n@attribute c numeric\n@data\nx,1\ny,2\n")
        with pytest.raises(ValueError, match="nominal"):
            train_c45(ds)


class TestPredict:
    def test_pure_leaf_distribution(self, weather):
        model = train_c45(weather)
        # overcast instances hit the pure 'yes' leaf
        row = weather.X[2]
        dist = tree_predict(model, row)
        assert dist[0] == pytest.approx(1.0)

    def test_missing_follows_largest_branch_cart(self):
        # binary split with branch weights 10 vs 30: missing goes right
        text = ("@relation t\n@attribute a {u,v}\n@attribute c {p,q}\n@data\n" +
                "u,p\n" * 10 + "v,q\n" * 30)
        ds = parse_arff(text)
        model = train_cart_spaarc(ds, split_sampling=False, attr_sampling=False)
        assert model.missing_policy == MISSING_LARGEST
        dist = tree_predict(model, np.array([np.nan, np.nan]))
        assert int(np.argmax(dist)) == 1

    def test_c45_missing_blends_branches(self, weather):
        model = train_c45(weather)
        row = np.full(weather.n_attributes, np.nan)
        dist = tree_predict(model, row)
        assert dist.sum() == pytest.approx(1.0, abs=1e-9)
        assert (dist > 0).all()

    def test_every_training_instance_reaches_one_leaf(self, weather_numeric):
        model = train_cart_spaarc(weather_numeric, split_sampling=False,
                                  attr_sampling=False)
        for i in range(weather_numeric.n_instances):
            dist = tree_predict(model, weather_numeric.X[i])
            assert dist.sum() == pytest.approx(1.0, abs=1e-9)

    def test_schema_mismatch(self, weather):
        model = train_c45(weather)
        with pytest.raises(ValueError, match="schema"):
            tree_predict(model, np.zeros(3))


class TestRender:
    def test_single_leaf_one_line(self):
        model = train_c45(parse_arff(PURE))
        assert len(render_tree(model).splitlines()) == 1

    def test_line_count_equals_node_count(self, weather, weather_numeric):
        for ds in (weather, weather_numeric):
            model = train_c45(ds)
            text = render_tree(model)
            assert len(text.splitlines()) == model.node_count == count_nodes(model.root)

    def test_rendering_deterministic(self, weather_numeric):
        a = render_tree(train_c45(weather_numeric))
        b = render_tree(train_c45(weather_numeric))
        assert a == b


def random_nominal_dataset(rng, n_rows, n_attrs=3, n_classes=2):
    attrs = []
    for j in range(n_attrs):
        attrs.append(Attribute(f"a{j}", NOMINAL, j, ("u", "v", "w")))
    attrs.append(Attribute("class", NOMINAL, n_attrs,
                           tuple(f"c{i}" for i in range(n_classes))))
    X = np.column_stack([
        rng.integers(0, 3, n_rows).astype(float) for _ in range(n_attrs)
    ] + [rng.integers(0, n_classes, n_rows).astype(float)])
    # class weakly depends on attribute 0 so trees have something to learn
    X[:, n_attrs] = np.where(rng.random(n_rows) < 0.7,
                             X[:, 0] % n_classes, X[:, n_attrs])
    return Dataset("rand", attrs, X)


class TestRepTree:
    def test_pure_dataset_single_leaf(self):
        model = train_rep_tree(parse_arff(PURE))
        assert model.root.is_leaf

    def test_too_few_instances(self):
        ds = parse_arff("@relation t\n@attribute a {x,y}\n@attribute c {p,q}\n@data\nx,p\ny,q\n")
        with pytest.raises(ValueError, match="at least"):
            train_rep_tree(ds, prune_folds=3)

    def test_pruning_never_grows_tree(self):
        rng = np.random.default_rng(11)
        for trial in range(20):
            ds = random_nominal_dataset(rng, 60)
            folds = stratified_folds(ds, 3, seed=trial)
            grow_rows = np.nonzero(folds != 2)[0]
            grower = InfoGainGrower(ds, min_leaf=2, missing=MISSING_FRACTION)
            unpruned = count_nodes(grower.grow(grow_rows))
            pruned_model = train_rep_tree(ds, seed=trial)
            assert count_nodes(pruned_model.root) <= unpruned

    def test_pruning_never_increases_holdout_error(self):
        rng = np.random.default_rng(5)
        from arffmine.trees import _rep_prune

        for trial in range(10):
            ds = random_nominal_dataset(rng, 45)
            folds = stratified_folds(ds, 3, seed=trial)
            grow_rows = np.nonzero(folds != 2)[0]
            prune_rows = np.asarray(np.nonzero(folds == 2)[0], dtype=np.intp)
            codes = ds.class_codes()
            weights = np.ones(len(prune_rows))

            grower = InfoGainGrower(ds, min_leaf=2, missing=MISSING_FRACTION)
            root = grower.grow(grow_rows)
            before = _holdout_errors(root, ds, codes, prune_rows, weights)
            after = _rep_prune(root, ds, codes, prune_rows, weights)
            assert after <= before + 1e-9

    def test_deterministic(self, weather):
        a = train_rep_tree(weather, seed=3)
        b = train_rep_tree(weather, seed=3)
        assert render_tree(a) == render_tree(b)


def _holdout_errors(node, ds, codes, rows, weights):
    from arffmine.trees import _route_fractional

    if node.is_leaf:
        if len(rows) == 0:
            return 0.0
        return float(weights[codes[rows] != node.prediction].sum())
    total = 0.0
    for child, (r, w) in zip(node.children, _route_fractional(node, ds, rows, weights)):
        total += _holdout_errors(child, ds, codes, r, w)
    return total


def oracle_plain_cart(ds, min_leaf=2):
    """Independent plain-CART: binary Gini splits, one-vs-rest nominals,
    midpoint thresholds, first-best tie-breaks, missing to heaviest branch.

    Deliberately structured differently from the library (explicit python
    recursion over index lists, direct Gini recomputation per candidate).
    """
    codes = ds.class_codes()
    K = len(ds.class_attribute.values)

    def gini_of(rows):
        if not rows:
            return 0.0
        counts = np.bincount(codes[rows], minlength=K)
        p = counts / len(rows)
        return 1.0 - float((p * p).sum())

    def split_rows(rows, j, test):
        left, right, miss = [], [], []
        for i in rows:
            v = ds.X[i, j]
            if math.isnan(v):
                miss.append(i)
            elif test(v):
                left.append(i)
            else:
                right.append(i)
        return left, right, miss

    def best_split(rows):
        parent = gini_of(rows)
        n = len(rows)
        best = None
        for j in ds.feature_indices():
            attr = ds.attributes[j]
            known = [i for i in rows if not math.isnan(ds.X[i, j])]
            if attr.kind == NOMINAL:
                for v in range(len(attr.values)):
                    left = [i for i in known if ds.X[i, j] == v]
                    right = [i for i in known if ds.X[i, j] != v]
                    if len(left) < min_leaf or len(right) < min_leaf:
                        continue
                    gain = parent - (len(left) / len(known)) * gini_of(left) \
                        - (len(right) / len(known)) * gini_of(right)
                    key = (j, "equals", float(v))
                    if gain > 1e-12 and (best is None or gain > best[0] + 1e-12):
                        best = (gain, key, left, right)
            else:
                values = sorted(set(ds.X[i, j] for i in known))
                for lo, hi in zip(values, values[1:]):
                    t = (lo + hi) / 2
                    left = [i for i in known if ds.X[i, j] <= t]
                    right = [i for i in known if ds.X[i, j] > t]
                    if len(left) < min_leaf or len(right) < min_leaf:
                        continue
                    gain = parent - (len(left) / len(known)) * gini_of(left) \
                        - (len(right) / len(known)) * gini_of(right)
                    key = (j, "numeric", t)
                    if gain > 1e-12 and (best is None or gain > best[0] + 1e-12):
                        best = (gain, key, left, right)
        return best

    def grow(rows):
        counts = np.bincount(codes[rows], minlength=K)
        if (counts > 0).sum() <= 1 or len(rows) < 2 * min_leaf:
            return ("leaf", counts)
        found = best_split(rows)
        if found is None:
            return ("leaf", counts)
        gain, (j, kind, param), left, right = found
        missing = [i for i in rows if math.isnan(ds.X[i, j])]
        if len(left) >= len(right):
            left = left + missing
        else:
            right = right + missing
        return ("node", j, kind, param, grow(left), grow(right), counts)

    def predict(tree, row):
        if tree[0] == "leaf":
            return int(np.argmax(tree[1]))
        _, j, kind, param, left, right, counts = tree
        v = row[j]
        if math.isnan(v):
            lw = _tree_total(left)
            rw = _tree_total(right)
            return predict(left if lw >= rw else right, row)
        if kind == "equals":
            return predict(left if v == param else right, row)
        return predict(left if v <= param else right, row)

    def _tree_total(tree):
        return int(tree[1].sum()) if tree[0] == "leaf" else int(tree[6].sum())

    tree = grow(list(range(ds.n_instances)))
    return lambda row: predict(tree, row)


class TestSpaarc:
    def test_pure_dataset_single_leaf(self):
        model = train_cart_spaarc(parse_arff(PURE))
        assert model.root.is_leaf

    def test_flags_off_equals_independent_cart(self, weather, weather_numeric):
        for ds in (weather, weather_numeric):
            model = train_cart_spaarc(ds, split_sampling=False, attr_sampling=False)
            oracle = oracle_plain_cart(ds)
            for i in range(ds.n_instances):
                assert int(np.argmax(tree_predict(model, ds.X[i]))) == oracle(ds.X[i])

    def test_sampling_noop_when_small(self, weather_numeric):
        ds = weather_numeric
        # few distinct numerics and few attributes: optimizations degenerate
        plain = train_cart_spaarc(ds, split_sampling=False, attr_sampling=False)
        sampled = train_cart_spaarc(ds, split_sampling=True, max_points=20,
                                    attr_sampling=False)
        for i in range(ds.n_instances):
            assert np.allclose(tree_predict(plain, ds.X[i]),
                               tree_predict(sampled, ds.X[i]))

    def test_attr_sampling_odd_depths_subset(self):
        # 9 attributes: sqrt subset = 3 at odd depths
        rng = np.random.default_rng(3)
        n = 400
        cols = [rng.random(n) for _ in range(9)]
        labels = (cols[0] > 0.5).astype(float)
        attrs = [Attribute(f"a{j}", NUMERIC, j) for j in range(9)]
        attrs.append(Attribute("class", NOMINAL, 9, ("p", "q")))
        X = np.column_stack(cols + [labels])
        ds = Dataset("t", attrs, X)
        model = train_cart_spaarc(ds, split_sampling=False, attr_sampling=True, seed=1)
        # tree still trains and predicts coherently
        hits = sum(int(np.argmax(tree_predict(model, X[i]))) == int(labels[i])
                   for i in range(n))
        assert hits / n > 0.95

    def test_min_leaf_honored(self, weather, weather_numeric):
        for ds in (weather, weather_numeric):
            model = train_cart_spaarc(ds, min_leaf=3)
            assert leaf_weight_check(model.root, 3)

    def test_deterministic(self, weather_numeric):
        a = train_cart_spaarc(weather_numeric, seed=7)
        b = train_cart_spaarc(weather_numeric, seed=7)
        assert render_tree(a) == render_tree(b)
