"""Baseline classifiers: ZeroR, OneR and naive Bayes."""

from __future__ import annotations

import math

import numpy as np

from .data import NOMINAL, NUMERIC, Dataset


def _check_classification(ds: Dataset):
    if ds.class_attribute.kind != NOMINAL:
        raise ValueError("class attribute must be nominal")
    if ds.n_instances == 0:
        raise ValueError("dataset has no instances")
    for j in ds.feature_indices():
        if ds.attributes[j].kind == "string":
            raise ValueError(f"string attribute {ds.attributes[j].name!r} is not supported")


def class_counts(ds: Dataset) -> np.ndarray:
    codes = ds.class_codes()
    return np.bincount(codes, minlength=len(ds.class_attribute.values)).astype(np.float64)


# ---------------------------------------------------------------------------
# ZeroR
# ---------------------------------------------------------------------------

class ZeroRModel:
    """Predicts the modal training class; ties go to the lowest class index."""

    def __init__(self, class_labels, counts):
        self.class_labels = tuple(class_labels)
        self.counts = np.asarray(counts, dtype=np.float64)
        self.prediction = int(np.argmax(self.counts))
        self._dist = self.counts / self.counts.sum()

    def predict_proba(self, row):
        return self._dist

    def describe(self):
        lines = [f"ZeroR: predict {self.class_labels[self.prediction]!r}"]
        lines += [f"  {l}: {int(c)}" for l, c in zip(self.class_labels, self.counts)]
        return "\n".join(lines)


def train_zero_r(ds: Dataset, ctx=None) -> ZeroRModel:
    _check_classification(ds)
    return ZeroRModel(ds.class_attribute.values, class_counts(ds))


# ---------------------------------------------------------------------------
# OneR
# ---------------------------------------------------------------------------

class OneRModel:
    """Single-attribute rule; numeric attributes are bucketed by value ranges."""

    def __init__(self, class_labels, attribute, attr_name, kind, value_map=None,
                 boundaries=None, bucket_classes=None, missing_class=0, errors=0):
        self.class_labels = tuple(class_labels)
        self.attribute = attribute
        self.attr_name = attr_name
        self.kind = kind
        self.value_map = value_map            # nominal: value index -> class index
        self.boundaries = boundaries          # numeric: ascending cut points
        self.bucket_classes = bucket_classes  # numeric: len(boundaries) + 1 classes
        self.missing_class = missing_class
        self.training_errors = errors

    def _predict_class(self, row):
        v = row[self.attribute]
        if math.isnan(v):
            return self.missing_class
        if self.kind == NOMINAL:
            return self.value_map[int(v)]
        b = int(np.searchsorted(self.boundaries, v, side="left"))
        return self.bucket_classes[b]

    def predict_proba(self, row):
        dist = np.zeros(len(self.class_labels))
        dist[self._predict_class(row)] = 1.0
        return dist

    def describe(self):
        lines = [f"OneR on {self.attr_name!r} ({self.training_errors} training errors)"]
        if self.kind == NOMINAL:
            for v, c in sorted(self.value_map.items()):
                lines.append(f"  = value[{v}] -> {self.class_labels[c]}")
        else:
            prev = None
            for b, c in zip(list(self.boundaries) + [None], self.bucket_classes):
                lo = "-inf" if prev is None else f"{prev:g}"
                hi = "+inf" if b is None else f"{b:g}"
                lines.append(f"  ({lo}, {hi}) -> {self.class_labels[c]}")
                prev = b
        lines.append(f"  missing -> {self.class_labels[self.missing_class]}")
        return "\n".join(lines)


def _majority(counts):
    return int(np.argmax(counts))


def _one_r_nominal(col, codes, n_classes, n_values, global_major):
    value_map = {}
    errors = 0
    known = ~np.isnan(col)
    for v in range(n_values):
        mask = known & (col == v)
        if mask.any():
            counts = np.bincount(codes[mask], minlength=n_classes)
            c = _majority(counts)
            errors += int(counts.sum() - counts[c])
        else:
            c = global_major
        value_map[v] = c
    missing_class, miss_err = _missing_branch(codes, ~known, n_classes, global_major)
    return value_map, missing_class, errors + miss_err


def _missing_branch(codes, miss_mask, n_classes, global_major):
    if miss_mask.any():
        counts = np.bincount(codes[miss_mask], minlength=n_classes)
        c = _majority(counts)
        return c, int(counts.sum() - counts[c])
    return global_major, 0


def _one_r_numeric(col, codes, n_classes, min_bucket, global_major):
    known = ~np.isnan(col)
    vals = col[known]
    labs = codes[known]
    order = np.argsort(vals, kind="stable")
    vals, labs = vals[order], labs[order]

    # greedy sweep: close a bucket once its majority class has min_bucket
    # members and the next value differs (equal values never straddle buckets);
    # each bucket records (counts, top value, first value of the next bucket)
    buckets = []
    counts = np.zeros(n_classes, dtype=np.int64)
    for i in range(len(vals)):
        counts[labs[i]] += 1
        if counts.max() >= min_bucket and i + 1 < len(vals) and vals[i + 1] != vals[i]:
            buckets.append((counts.copy(), vals[i], vals[i + 1]))
            counts = np.zeros(n_classes, dtype=np.int64)
    if counts.sum() > 0:
        if buckets and counts.max() < min_bucket:
            prev_counts, _, _ = buckets.pop()
            counts += prev_counts
        buckets.append((counts, vals[-1], None))

    # merge adjacent buckets sharing a majority class
    merged = [buckets[0]]
    for counts, hi, nxt in buckets[1:]:
        prev_counts, _, _ = merged[-1]
        if _majority(prev_counts) == _majority(counts):
            merged[-1] = (prev_counts + counts, hi, nxt)
        else:
            merged.append((counts, hi, nxt))

    boundaries = []
    bucket_classes = []
    errors = 0
    for idx, (counts, hi, nxt) in enumerate(merged):
        c = _majority(counts)
        bucket_classes.append(c)
        errors += int(counts.sum() - counts[c])
        if idx < len(merged) - 1:
            boundaries.append((hi + nxt) / 2.0)
    missing_class, miss_err = _missing_branch(codes, ~known, n_classes, global_major)
    return np.array(boundaries), bucket_classes, missing_class, errors + miss_err


def train_one_r(ds: Dataset, min_bucket: int = 6, ctx=None) -> OneRModel:
    """Pick the single attribute whose one-attribute rule has fewest training errors."""
    _check_classification(ds)
    features = ds.feature_indices()
    if not features:
        raise ValueError("no usable attribute for OneR")
    codes = ds.class_codes()
    n_classes = len(ds.class_attribute.values)
    global_major = _majority(np.bincount(codes, minlength=n_classes))

    best = None
    for j in features:
        attr = ds.attributes[j]
        col = ds.column(j)
        if attr.kind == NOMINAL:
            value_map, miss_c, errors = _one_r_nominal(
                col, codes, n_classes, len(attr.values), global_major)
            model = OneRModel(ds.class_attribute.values, j, attr.name, NOMINAL,
                              value_map=value_map, missing_class=miss_c, errors=errors)
        else:
            if np.isnan(col).all():
                continue
            boundaries, bucket_classes, miss_c, errors = _one_r_numeric(
                col, codes, n_classes, min_bucket, global_major)
            model = OneRModel(ds.class_attribute.values, j, attr.name, NUMERIC,
                              boundaries=boundaries, bucket_classes=bucket_classes,
                              missing_class=miss_c, errors=errors)
        if best is None or model.training_errors < best.training_errors:
            best = model
    if best is None:
        raise ValueError("no usable attribute for OneR")
    return best


# ---------------------------------------------------------------------------
# Naive Bayes
# ---------------------------------------------------------------------------

class NaiveBayesModel:
    """Add-1 smoothed nominal tables and per-class Gaussians for numerics.

    Numeric attributes are handled at a finite precision: the mean gap
    between adjacent distinct training values. Values are rounded to that
    grid and the class-conditional stddev is floored at precision/6, so a
    near-constant attribute cannot annihilate the posterior.
    """

    MIN_STDDEV = 1e-6

    def __init__(self, ds: Dataset):
        self.class_labels = ds.class_attribute.values
        self.attributes = ds.attributes
        self.class_index = ds.class_index
        n_classes = len(self.class_labels)
        codes = ds.class_codes()
        counts = np.bincount(codes, minlength=n_classes).astype(np.float64)
        self.priors = (counts + 1.0) / (counts.sum() + n_classes)

        self.nominal_tables = {}   # attr index -> (n_classes, n_values) probs
        self.gaussians = {}        # attr index -> (precision, means, stds, seen)
        for j in ds.feature_indices():
            attr = ds.attributes[j]
            col = ds.column(j)
            known = ~np.isnan(col)
            if attr.kind == NOMINAL:
                n_values = len(attr.values)
                table = np.zeros((n_classes, n_values))
                for c in range(n_classes):
                    mask = known & (codes == c)
                    cc = np.bincount(col[mask].astype(np.intp), minlength=n_values)
                    table[c] = (cc + 1.0) / (cc.sum() + n_values)
                self.nominal_tables[j] = table
            else:
                distinct = np.unique(col[known])
                if distinct.size > 1:
                    precision = float((distinct[-1] - distinct[0]) / (distinct.size - 1))
                else:
                    precision = 0.01
                rounded = np.round(col / precision) * precision
                means = np.zeros(n_classes)
                stds = np.full(n_classes, max(precision / 6.0, self.MIN_STDDEV))
                seen = np.zeros(n_classes, dtype=bool)
                for c in range(n_classes):
                    vals = rounded[known & (codes == c)]
                    if vals.size:
                        seen[c] = True
                        means[c] = vals.mean()
                        stds[c] = max(float(vals.std()), precision / 6.0, self.MIN_STDDEV)
                self.gaussians[j] = (precision, means, stds, seen)

    @staticmethod
    def _log_interval_prob(v, precision, means, stds):
        """log P(value falls in its precision-wide interval) per class."""
        z_lo = (v - means - precision / 2.0) / stds
        z_hi = (v - means + precision / 2.0) / stds
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        out = np.empty(len(means))
        for c in range(len(means)):
            p = 0.5 * (math.erf(z_hi[c] * inv_sqrt2) - math.erf(z_lo[c] * inv_sqrt2))
            if p > 1e-300:
                out[c] = math.log(p)
            else:
                # interval underflowed: fall back to density * width at the midpoint
                zm = (z_lo[c] + z_hi[c]) / 2.0
                out[c] = -0.5 * zm * zm - 0.5 * math.log(2 * math.pi) \
                    + math.log(max(z_hi[c] - z_lo[c], 1e-300))
        return out

    def predict_proba(self, row):
        # log-domain accumulation to avoid underflow on wide datasets
        log_post = np.log(self.priors)
        for j, table in self.nominal_tables.items():
            v = row[j]
            if not math.isnan(v):
                log_post = log_post + np.log(table[:, int(v)])
        for j, (precision, means, stds, seen) in self.gaussians.items():
            v = row[j]
            if not math.isnan(v):
                v = round(v / precision) * precision
                term = self._log_interval_prob(v, precision, means, stds)
                log_post = log_post + np.where(seen, term, 0.0)
        log_post -= log_post.max()
        post = np.exp(log_post)
        return post / post.sum()

    def describe(self):
        lines = ["NaiveBayes"]
        lines.append("  priors: " + ", ".join(
            f"{l}={p:.4f}" for l, p in zip(self.class_labels, self.priors)))
        for j, table in sorted(self.nominal_tables.items()):
            attr = self.attributes[j]
            lines.append(f"  {attr.name}:")
            for c, label in enumerate(self.class_labels):
                row = ", ".join(f"{v}={table[c, k]:.4f}" for k, v in enumerate(attr.values))
                lines.append(f"    {label}: {row}")
        for j, (_, means, stds, _) in sorted(self.gaussians.items()):
            attr = self.attributes[j]
            per_class = ", ".join(
                f"{l}: mu={m:.4f} sd={s:.4f}"
                for l, m, s in zip(self.class_labels, means, stds))
            lines.append(f"  {attr.name}: {per_class}")
        return "\n".join(lines)


def train_naive_bayes(ds: Dataset, ctx=None) -> NaiveBayesModel:
    _check_classification(ds)
    return NaiveBayesModel(ds)


def nb_predict(model: NaiveBayesModel, row) -> np.ndarray:
    row = np.asarray(row, dtype=np.float64)
    if row.shape[0] != len(model.attributes):
        raise ValueError("instance does not match the training schema")
    return model.predict_proba(row)
