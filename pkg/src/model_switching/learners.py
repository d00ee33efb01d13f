"""Registry of learner kinds and the trainer factory used by switching."""

from dataclasses import dataclass
from typing import Dict, Optional, Type

from .boosting import BoostedTrees, BoostParams
from .classifier import Classifier, Params
from .dataset import Dataset
from .errors import InvalidArgumentError
from .forest import ForestParams, RandomForest
from .svm import LinearSvm, LinearSvmParams
from .tree import DecisionTree, TreeParams

MODEL_KINDS: Dict[str, Type[Classifier]] = {
    RandomForest.kind: RandomForest,
    BoostedTrees.kind: BoostedTrees,
    LinearSvm.kind: LinearSvm,
    DecisionTree.kind: DecisionTree,
}

PARAMS_TYPES: Dict[str, Type[Params]] = {
    RandomForest.kind: ForestParams,
    BoostedTrees.kind: BoostParams,
    LinearSvm.kind: LinearSvmParams,
    DecisionTree.kind: TreeParams,
}

# short names accepted on the command line
ALIASES = {
    "rf": RandomForest.kind,
    "gbt": BoostedTrees.kind,
    "svm": LinearSvm.kind,
    "tree": DecisionTree.kind,
}


def resolve_kind(kind: str) -> str:
    """
    Canonical model kind for ``kind`` or one of its short aliases.

    :raises InvalidArgumentError: If the kind is unknown.
    """
    kind = ALIASES.get(kind, kind)
    if kind not in MODEL_KINDS:
        known = ", ".join(sorted(set(MODEL_KINDS) | set(ALIASES)))
        raise InvalidArgumentError(f"unknown model kind {kind!r} (known: {known})")
    return kind


@dataclass(frozen=True)
class Trainer:
    """
    A ``Dataset -> Classifier`` training procedure.

    :param kind: Canonical model kind.
    :param params: Hyperparameters of that kind.
    :param n_jobs: Worker threads (forests only).
    """

    kind: str
    params: Params
    n_jobs: int = 1

    def __call__(self, train: Dataset) -> Classifier:
        cls = MODEL_KINDS[self.kind]
        if cls is RandomForest:
            return RandomForest(self.params, n_jobs=self.n_jobs).fit(train)
        return cls(self.params).fit(train)


def make_trainer(
    kind: str, params: Optional[Params] = None, n_jobs: int = 1
) -> Trainer:
    """
    Trainer for ``kind`` with ``params`` (the kind's defaults if omitted).

    :raises InvalidArgumentError: If the kind is unknown or ``params`` has the
        wrong type.
    """
    kind = resolve_kind(kind)
    expected = PARAMS_TYPES[kind]
    if params is None:
        params = expected()
    if not isinstance(params, expected):
        raise InvalidArgumentError(
            f"{kind} needs {expected.__name__}, got {type(params).__name__}"
        )
    return Trainer(kind, params, n_jobs)
