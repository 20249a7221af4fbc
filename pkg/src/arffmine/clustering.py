"""SimpleKMeans-style clustering and farthest-first traversal.

Distances: squared Euclidean over min-max normalized numeric attributes plus
0/1 mismatch over nominal attributes. The class attribute is excluded and
missing cells are imputed to the global mean/mode before clustering.
"""

from __future__ import annotations

import numpy as np

from .data import NOMINAL, NUMERIC, Dataset
from .runtime import checkpoint


class _FeatureSpace:
    """Imputation + min-max scaling shared by training and later assignment."""

    def __init__(self, ds: Dataset):
        for j in ds.feature_indices():
            if ds.attributes[j].kind == "string":
                raise ValueError(
                    f"string attribute {ds.attributes[j].name!r} is not supported")
        self.feature_idx = ds.feature_indices()
        self.kinds = [ds.attributes[j].kind for j in self.feature_idx]
        self.mins = np.zeros(len(self.feature_idx))
        self.spans = np.ones(len(self.feature_idx))
        self.fills = np.zeros(len(self.feature_idx))
        for f, j in enumerate(self.feature_idx):
            col = ds.X[:, j]
            known = col[~np.isnan(col)]
            if self.kinds[f] == NUMERIC:
                if known.size:
                    lo, hi = float(known.min()), float(known.max())
                    self.mins[f] = lo
                    self.spans[f] = (hi - lo) if hi > lo else 1.0
                    self.fills[f] = float(known.mean())
            else:
                if known.size:
                    counts = np.bincount(known.astype(np.intp))
                    self.fills[f] = int(np.argmax(counts))
        self.numeric_mask = np.array([k == NUMERIC for k in self.kinds])

    def transform(self, X):
        """Rows of the raw instance matrix -> imputed, scaled feature rows."""
        F = X[:, self.feature_idx].astype(np.float64, copy=True)
        for f in range(F.shape[1]):
            col = F[:, f]
            miss = np.isnan(col)
            col[miss] = self.fills[f]
            if self.numeric_mask[f]:
                F[:, f] = (col - self.mins[f]) / self.spans[f]
        return F

    def distances_sq(self, F, centroids):
        """(n, k) squared distances between feature rows and centroids."""
        num = self.numeric_mask
        d = np.zeros((F.shape[0], centroids.shape[0]))
        if num.any():
            diff = F[:, None, num] - centroids[None, :, num]
            d += (diff * diff).sum(axis=2)
        if (~num).any():
            d += (F[:, None, ~num] != centroids[None, :, ~num]).sum(axis=2)
        return d


class ClusterModel:
    def __init__(self, ds: Dataset, space, centroids, assignments, within, iterations,
                 algorithm, params):
        self.attributes = ds.attributes
        self.space = space
        self.centroids = centroids
        self.sizes = np.bincount(assignments, minlength=len(centroids)).tolist()
        self.within_score = float(within)
        self.iterations = int(iterations)
        self.algorithm = algorithm
        self.params = dict(params)

    @property
    def k(self):
        return len(self.centroids)

    def assign(self, row):
        row = np.asarray(row, dtype=np.float64)
        if row.shape[0] != len(self.attributes):
            raise ValueError("instance does not match the training schema")
        F = self.space.transform(row[None, :])
        d = self.space.distances_sq(F, self.centroids)
        return int(np.argmin(d[0]))

    def centroid_text(self, c):
        cells = []
        for f, j in enumerate(self.space.feature_idx):
            attr = self.attributes[j]
            v = self.centroids[c, f]
            if attr.kind == NOMINAL:
                cells.append(f"{attr.name}={attr.values[int(v)]}")
            else:
                raw = v * self.space.spans[f] + self.space.mins[f]
                cells.append(f"{attr.name}={raw:.4f}")
        return ", ".join(cells)

    def describe(self):
        lines = [f"{self.algorithm}: k={self.k}, iterations={self.iterations}, "
                 f"within-cluster score={self.within_score:.6f}"]
        for c in range(self.k):
            lines.append(f"cluster {c} (n={self.sizes[c]}): {self.centroid_text(c)}")
        return "\n".join(lines)


def assign_cluster(model: ClusterModel, row) -> int:
    return model.assign(row)


def _check_k(ds, k):
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > ds.n_instances:
        raise ValueError(f"k={k} exceeds the {ds.n_instances} available instances")


def _distinct_seeded_rows(F, k, rng):
    order = rng.permutation(F.shape[0])
    picked = []
    seen = set()
    for i in order:
        key = tuple(F[i])
        if key not in seen:
            seen.add(key)
            picked.append(i)
            if len(picked) == k:
                break
    if len(picked) < k:
        # fewer distinct points than clusters: fall back to allowing duplicates
        for i in order:
            picked.append(i)
            if len(picked) == k:
                break
    return np.array(picked, dtype=np.intp)


def train_kmeans(ds: Dataset, k: int = 2, max_iter: int = 500, seed: int = 1,
                 ctx=None) -> ClusterModel:
    """Seeded distinct initial centroids; assign/update until assignments are
    stable or max_iter; an emptied cluster is reseeded to the point farthest
    from its former centroid."""
    _check_k(ds, k)
    space = _FeatureSpace(ds)
    F = space.transform(ds.X)
    rng = np.random.default_rng(seed)
    centroids = F[_distinct_seeded_rows(F, k, rng)].copy()

    assignments = np.full(F.shape[0], -1, dtype=np.intp)
    iterations = 0
    for _ in range(max_iter):
        checkpoint(ctx)
        iterations += 1
        d = space.distances_sq(F, centroids)
        new_assign = np.argmin(d, axis=1)
        if (new_assign == assignments).all():
            break
        assignments = new_assign
        for c in range(k):
            members = F[assignments == c]
            if len(members) == 0:
                far = int(np.argmax(space.distances_sq(F, centroids[c][None, :])[:, 0]))
                centroids[c] = F[far]
                continue
            for f in range(F.shape[1]):
                if space.numeric_mask[f]:
                    centroids[c, f] = members[:, f].mean()
                else:
                    counts = np.bincount(members[:, f].astype(np.intp))
                    centroids[c, f] = int(np.argmax(counts))

    d = space.distances_sq(F, centroids)
    within = d[np.arange(len(F)), assignments].sum()
    return ClusterModel(ds, space, centroids, assignments, within, iterations,
                        "kmeans", {"k": k, "max_iter": max_iter, "seed": seed})


def train_farthest_first(ds: Dataset, k: int = 2, seed: int = 1,
                         ctx=None) -> ClusterModel:
    """First center seeded-random; each next center maximizes the distance to
    its nearest chosen center. Centers are always actual data points."""
    _check_k(ds, k)
    space = _FeatureSpace(ds)
    F = space.transform(ds.X)
    rng = np.random.default_rng(seed)

    centers = [int(rng.integers(0, F.shape[0]))]
    min_d = space.distances_sq(F, F[centers[-1]][None, :])[:, 0]
    while len(centers) < k:
        checkpoint(ctx)
        nxt = int(np.argmax(min_d))
        centers.append(nxt)
        min_d = np.minimum(min_d, space.distances_sq(F, F[nxt][None, :])[:, 0])

    centroids = F[np.array(centers, dtype=np.intp)].copy()
    d = space.distances_sq(F, centroids)
    assignments = np.argmin(d, axis=1)
    within = d[np.arange(len(F)), assignments].sum()
    return ClusterModel(ds, space, centroids, assignments, within, 1,
                        "farthestfirst", {"k": k, "seed": seed})
