"""
Dynamic Model Switching

Start with a cheap model while data is scarce; as the dataset grows, train
a more capable candidate and switch to it only when it proves better on a
shared validation set, optionally gated by a user-defined accuracy
threshold.

Core Concepts:
- Seeded, splittable random streams: (seed, label path) → [0, 2^64)^∞
- Synthetic Gaussian-cluster datasets with label/feature noise
- Native learners: CART trees, random forests, Newton-boosted trees, linear SVM
- Champion/challenger switching with an auditable report
"""

from .boosting import BoostedTrees, BoostParams, fit_boosted
from .classifier import Classifier, predict, predict_score
from .dataset import (
    Dataset,
    DatasetSpec,
    NoiseSpec,
    add_noise,
    generate,
    read_csv,
    split_indices,
    train_val_split,
    write_csv,
)
from .errors import (
    DatasetParseError,
    InvalidArgumentError,
    ModelFormatError,
    ModelSwitchingError,
    StageError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    run_experiment,
    run_experiment_1,
    run_experiment_2,
    run_size_sweep,
)
from .forest import ForestParams, RandomForest, fit_forest
from .learners import MODEL_KINDS, make_trainer
from .metrics import EvalResult, accuracy, evaluate
from .persistence import load_model, save_model
from .rng import SeededRng, next_normal, next_uniform, rng_from_seed, rng_split
from .svm import LinearSvm, LinearSvmParams, fit_linear_svm
from .switching import (
    SwitchDecision,
    SwitchPolicy,
    SwitchReport,
    SwitchStage,
    decide,
    switch_chain,
    switch_models,
)
from .tree import DecisionTree, TreeParams, best_split, fit_tree, gini_impurity

__version__ = "0.1.0"

__all__ = [
    # Random streams
    "SeededRng",
    "rng_from_seed",
    "rng_split",
    "next_uniform",
    "next_normal",
    # Data
    "Dataset",
    "DatasetSpec",
    "NoiseSpec",
    "generate",
    "add_noise",
    "split_indices",
    "train_val_split",
    "read_csv",
    "write_csv",
    # Learners
    "Classifier",
    "predict",
    "predict_score",
    "gini_impurity",
    "best_split",
    "fit_tree",
    "TreeParams",
    "DecisionTree",
    "ForestParams",
    "RandomForest",
    "fit_forest",
    "BoostParams",
    "BoostedTrees",
    "fit_boosted",
    "LinearSvmParams",
    "LinearSvm",
    "fit_linear_svm",
    "MODEL_KINDS",
    "make_trainer",
    "save_model",
    "load_model",
    # Evaluation and switching
    "EvalResult",
    "accuracy",
    "evaluate",
    "SwitchPolicy",
    "SwitchDecision",
    "SwitchReport",
    "SwitchStage",
    "decide",
    "switch_models",
    "switch_chain",
    # Experiments
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "run_experiment_1",
    "run_experiment_2",
    "run_size_sweep",
    # Errors
    "ModelSwitchingError",
    "InvalidArgumentError",
    "DatasetParseError",
    "ModelFormatError",
    "StageError",
]
