"""Supervised term-class relevance weighting for text categorization.

Weights each (term, class) pair by how concentrated the term's occurrences
are in the class, represents documents as class-count-dimensional vectors of
mean term scores, and classifies with k-nearest-neighbours or one-vs-rest
kernel SVMs. A Bayes-posterior weighting serves as the comparison baseline,
and the experiment module sweeps training fractions the way the original
evaluation protocol does.
"""

__version__ = "0.1.0"

from .errors import ConfigError, DataError, TermclassError
from .corpus import (
    CORPUS_FORMATS,
    Document,
    LabeledCorpus,
    SplitSpec,
    load_corpus,
    stratified_split,
)
from .preprocess import (
    PreprocessConfig,
    TermCounts,
    Vocabulary,
    build_vocabulary,
    count_terms,
    load_stopwords,
    smart_stopwords,
    tokenize,
)
from .class_stats import ClassTermStats, build_stats, merge_stats
from .weighting import (
    SCHEMES,
    TermClassMatrix,
    bayes_posterior,
    class_term_density,
    class_term_weight,
    class_weight,
    relevance_table,
    term_class_relevance,
)
from .representation import (
    FeatureMatrix,
    FeatureVector,
    represent_corpus,
    represent_document,
)
from .knn import KnnModel, knn_predict, knn_predict_many
from .svm import (
    KERNEL_KINDS,
    BinaryMachine,
    KernelSpec,
    SvmModel,
    kernel_eval,
    max_kkt_violation,
    svm_fit,
    svm_predict,
    svm_predict_many,
)
from .evaluate import EvaluationReport, evaluate
from .experiment import (
    ExperimentConfig,
    CellResult,
    RunReport,
    TrainedModel,
    corpus_fingerprint,
    load_model,
    predict_with_model,
    run_sweep,
    save_model,
    train_model,
    write_csvs,
)

__all__ = [
    "__version__",
    "TermclassError", "ConfigError", "DataError",
    "Document", "LabeledCorpus", "SplitSpec", "CORPUS_FORMATS",
    "load_corpus", "stratified_split",
    "PreprocessConfig", "Vocabulary", "TermCounts",
    "tokenize", "build_vocabulary", "count_terms", "smart_stopwords", "load_stopwords",
    "ClassTermStats", "build_stats", "merge_stats",
    "SCHEMES", "TermClassMatrix", "relevance_table",
    "term_class_relevance", "bayes_posterior",
    "class_term_weight", "class_term_density", "class_weight",
    "FeatureVector", "FeatureMatrix", "represent_document", "represent_corpus",
    "KnnModel", "knn_predict", "knn_predict_many",
    "KERNEL_KINDS", "KernelSpec", "BinaryMachine", "SvmModel",
    "kernel_eval", "svm_fit", "svm_predict", "svm_predict_many", "max_kkt_violation",
    "EvaluationReport", "evaluate",
    "ExperimentConfig", "CellResult", "RunReport", "run_sweep", "write_csvs",
    "corpus_fingerprint",
    "TrainedModel", "train_model", "predict_with_model", "save_model", "load_model",
]
