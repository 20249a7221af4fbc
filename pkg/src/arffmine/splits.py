"""Impurity and split-scoring primitives shared by the tree learners.

Class distributions are plain 1-D numpy arrays of non-negative weights,
one entry per class value. Fractional weights are allowed (the C4.5 learner
spreads instances with missing split values across branches).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOMINAL_SPLIT = "nominal"
NUMERIC_SPLIT = "numeric"


def _plogp_sum(counts, total):
    # sum of -p*log2(p) with 0*log(0) == 0; p can underflow to 0 for
    # subnormal counts against a huge total, so filter after dividing
    p = counts[counts > 0] / total
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def entropy(counts) -> float:
    """Shannon entropy of a class distribution, in bits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("entropy of an empty distribution is undefined")
    return _plogp_sum(counts, total)


def gini(counts) -> float:
    """Gini impurity 1 - sum(p^2) of a class distribution."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("gini of an empty distribution is undefined")
    p = counts / total
    return float(1.0 - (p * p).sum())


def _weighted_impurity(branches, impurity):
    total = sum(float(b.sum()) for b in branches)
    if total <= 0:
        return 0.0
    acc = 0.0
    for b in branches:
        w = float(b.sum())
        if w > 0:
            acc += (w / total) * impurity(b)
    return acc


def info_gain(parent, branches) -> float:
    """Entropy decrease from splitting parent into the given branches."""
    parent = np.asarray(parent, dtype=np.float64)
    branches = [np.asarray(b, dtype=np.float64) for b in branches]
    return entropy(parent) - _weighted_impurity(branches, entropy)


def gini_gain(parent, branches) -> float:
    parent = np.asarray(parent, dtype=np.float64)
    branches = [np.asarray(b, dtype=np.float64) for b in branches]
    return gini(parent) - _weighted_impurity(branches, gini)


def split_info(branches) -> float:
    """Entropy of the branch-size distribution."""
    sizes = np.array([float(np.asarray(b, dtype=np.float64).sum()) for b in branches])
    total = sizes.sum()
    if total <= 0:
        return 0.0
    return _plogp_sum(sizes[sizes > 0], total)


def gain_ratio(parent, branches) -> float:
    """Info gain divided by split info; 0 when only one branch is non-empty."""
    si = split_info(branches)
    if si <= 0:
        return 0.0
    return info_gain(parent, branches) / si


@dataclass
class SplitCandidate:
    """A scored split: attribute, form, per-branch distributions and score."""

    attribute: int
    kind: str                      # NOMINAL_SPLIT or NUMERIC_SPLIT
    threshold: float | None
    branch_counts: list
    score: float


# ---------------------------------------------------------------------------
# Vectorized numeric-threshold scanning
# ---------------------------------------------------------------------------

def _rows_entropy(mat):
    """Per-row entropy of a (rows, classes) count matrix; empty rows give 0."""
    tot = mat.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(tot > 0, mat / np.where(tot > 0, tot, 1.0), 0.0)
        logp = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -(p * logp).sum(axis=1)


def _rows_gini(mat):
    tot = mat.sum(axis=1, keepdims=True)
    p = np.where(tot > 0, mat / np.where(tot > 0, tot, 1.0), 0.0)
    return np.where(tot[:, 0] > 0, 1.0 - (p * p).sum(axis=1), 0.0)


def sorted_class_cumulants(values, classes, n_classes, weights):
    """Sort by value and return (sorted values, cumulative class weights, boundaries).

    Boundaries are the indices i where sorted value i differs from i+1, i.e.
    the candidate cut positions between adjacent distinct values.
    """
    order = np.argsort(values, kind="stable")
    sv = values[order]
    onehot = np.zeros((len(sv), n_classes), dtype=np.float64)
    onehot[np.arange(len(sv)), classes[order]] = weights[order]
    cum = np.cumsum(onehot, axis=0)
    boundaries = np.nonzero(sv[:-1] != sv[1:])[0]
    return sv, cum, boundaries


def scan_thresholds(sv, cum, boundaries, criterion):
    """Score every boundary at once; returns (scores, thresholds) arrays.

    Boundaries come in ascending threshold order, so taking the first argmax
    of the scores breaks ties toward the lower threshold.
    """
    total = cum[-1]
    grand = float(total.sum())
    left = cum[boundaries]
    right = total[None, :] - left
    lt = left.sum(axis=1)
    rt = right.sum(axis=1)

    if criterion == "gini":
        parent = float(gini(total))
        child = (lt / grand) * _rows_gini(left) + (rt / grand) * _rows_gini(right)
        scores = parent - child
    else:
        parent = float(entropy(total))
        child = (lt / grand) * _rows_entropy(left) + (rt / grand) * _rows_entropy(right)
        gains = parent - child
        if criterion == "infogain":
            scores = gains
        elif criterion == "gainratio":
            sizes = np.stack([lt, rt], axis=1)
            si = _rows_entropy(sizes)
            scores = np.where(si > 0, gains / np.where(si > 0, si, 1.0), 0.0)
        else:
            raise ValueError(f"unknown criterion {criterion!r}")

    thresholds = (sv[boundaries] + sv[boundaries + 1]) / 2.0
    return scores, thresholds


def _prepare_numeric(values, classes, weights):
    values = np.asarray(values, dtype=np.float64)
    classes = np.asarray(classes, dtype=np.intp)
    if weights is None:
        weights = np.ones(len(values), dtype=np.float64)
    else:
        weights = np.asarray(weights, dtype=np.float64)
    keep = ~np.isnan(values)
    return values[keep], classes[keep], weights[keep]


def _best_from_boundaries(values, classes, n_classes, weights, boundaries_filter,
                          criterion, attribute):
    sv, cum, boundaries = sorted_class_cumulants(values, classes, n_classes, weights)
    if boundaries.size == 0:
        return None
    boundaries = boundaries_filter(boundaries)
    if boundaries.size == 0:
        return None
    scores, thresholds = scan_thresholds(sv, cum, boundaries, criterion)
    best = int(np.argmax(scores))
    i = boundaries[best]
    left = cum[i]
    right = cum[-1] - left
    return SplitCandidate(attribute, NUMERIC_SPLIT, float(thresholds[best]),
                          [left, right], float(scores[best]))


def best_numeric_split(values, classes, n_classes=None, criterion="infogain",
                       weights=None, attribute=0):
    """Best threshold over all midpoints between adjacent distinct values.

    Returns None when fewer than two distinct non-missing values remain.
    """
    values, classes, weights = _prepare_numeric(values, classes, weights)
    if len(values) == 0:
        return None
    if n_classes is None:
        n_classes = int(classes.max()) + 1
    return _best_from_boundaries(values, classes, n_classes, weights,
                                 lambda b: b, criterion, attribute)


def rank_even_subset(boundaries, max_points):
    """At most max_points boundary indices, evenly spaced by rank.

    Picks are centered within equal-width rank bins so neither end of the
    value range is systematically excluded.
    """
    if boundaries.size <= max_points:
        return boundaries
    picks = (np.arange(max_points, dtype=np.float64) + 0.5) \
        * boundaries.size / max_points
    return boundaries[np.unique(picks.astype(np.intp))]


def sampled_numeric_split(values, classes, max_points, n_classes=None,
                          criterion="infogain", weights=None, attribute=0):
    """Like best_numeric_split but evaluating at most max_points thresholds.

    Candidate boundaries are taken evenly spaced by rank across the sorted
    distinct values, so a run with distinct-value count at or below the cap
    degenerates to the exhaustive scan.
    """
    if max_points < 2:
        raise ValueError("max_points must be at least 2")
    values, classes, weights = _prepare_numeric(values, classes, weights)
    if len(values) == 0:
        return None
    if n_classes is None:
        n_classes = int(classes.max()) + 1
    return _best_from_boundaries(values, classes, n_classes, weights,
                                 lambda b: rank_even_subset(b, max_points),
                                 criterion, attribute)
