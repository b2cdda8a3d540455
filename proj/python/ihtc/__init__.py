"""Threshold clustering, instance selection and hybrid clustering."""

from ._core import (
    ConfigError,
    DataError,
    Error,
    InfeasibleError,
    bss_tss,
    btpp_bruteforce,
    dbscan,
    dissimilarity,
    generate_gaussian_mixture,
    hac,
    hac_labels,
    ihtc,
    itis,
    kmeans,
    knn_graph,
    max_within_cluster_dissimilarity,
    pca_project,
    prediction_accuracy,
    standardize,
    sum_of_squares,
    threshold_cluster,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Error",
    "InfeasibleError",
    "bss_tss",
    "btpp_bruteforce",
    "dbscan",
    "dissimilarity",
    "generate_gaussian_mixture",
    "hac",
    "hac_labels",
    "ihtc",
    "itis",
    "kmeans",
    "knn_graph",
    "max_within_cluster_dissimilarity",
    "pca_project",
    "prediction_accuracy",
    "standardize",
    "sum_of_squares",
    "threshold_cluster",
]
