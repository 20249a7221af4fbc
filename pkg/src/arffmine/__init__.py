"""arffmine: a self-contained data-mining engine for ARFF datasets.

Train classifiers, clusterers and association-rule miners on ARFF files,
evaluate classifiers by stratified 10-fold cross-validation, and drive it
all through the library API, the ``arffmine`` CLI or the local run service.
"""

from .baselines import train_naive_bayes, train_one_r, train_zero_r
from .clustering import assign_cluster, train_farthest_first, train_kmeans
from .data import (
    Attribute,
    ArffError,
    Dataset,
    DatasetSummary,
    load_arff,
    parse_arff,
    set_class_index,
    summarize,
    write_arff,
)
from .engine import AlgorithmSpec, Engine, ValidationError, execute_spec, list_algorithms
from .evaluation import compute_metrics, cross_validate, stratified_folds
from .forests import bootstrap_sample, train_forest_pa, train_random_forest, train_sysfor
from .rules import mine_apriori
from .trees import render_tree, train_c45, train_cart_spaarc, train_rep_tree, tree_predict

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "ArffError",
    "AlgorithmSpec",
    "Dataset",
    "DatasetSummary",
    "Engine",
    "ValidationError",
    "assign_cluster",
    "bootstrap_sample",
    "compute_metrics",
    "cross_validate",
    "execute_spec",
    "list_algorithms",
    "load_arff",
    "mine_apriori",
    "parse_arff",
    "render_tree",
    "set_class_index",
    "stratified_folds",
    "summarize",
    "train_c45",
    "train_cart_spaarc",
    "train_farthest_first",
    "train_forest_pa",
    "train_kmeans",
    "train_naive_bayes",
    "train_one_r",
    "train_random_forest",
    "train_rep_tree",
    "train_sysfor",
    "train_zero_r",
    "tree_predict",
    "write_arff",
    "__version__",
]
