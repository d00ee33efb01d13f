"""
Champion/challenger switching between a current model and a candidate.

A candidate replaces the current model only when it wins on the shared
validation set:

    switch  ⇔  candidate > current + margin
               ∧ (¬require_threshold ∨ candidate ≥ accuracy_threshold)

Ties keep the current model. When the candidate loses, the first failing
condition is reported (improvement is checked before the threshold).
"""

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import structlog

from .classifier import Classifier
from .dataset import Dataset, NoiseSpec, add_noise
from .errors import InvalidArgumentError, ModelSwitchingError, StageError
from .metrics import EvalResult, evaluate, format_accuracy
from .rng import SeededRng

logger = structlog.get_logger(__name__)

CandidateTrainer = Callable[[Dataset], Classifier]


class Action(str, Enum):
    KEEP_CURRENT = "KeepCurrent"
    SWITCH_TO_CANDIDATE = "SwitchToCandidate"


class Reason(str, Enum):
    CANDIDATE_NOT_BETTER = "candidate_not_better"
    CANDIDATE_BELOW_THRESHOLD = "candidate_below_threshold"
    CANDIDATE_BETTER = "candidate_better"


@dataclass(frozen=True)
class SwitchPolicy:
    """
    :param accuracy_threshold: Minimum candidate accuracy when the gate is on.
    :param require_threshold: Enforce ``accuracy_threshold``.
    :param margin: Improvement the candidate must exceed.
    """

    accuracy_threshold: float = 0.8
    require_threshold: bool = True
    margin: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.accuracy_threshold <= 1.0:
            raise InvalidArgumentError(
                f"accuracy_threshold must be in [0, 1], got {self.accuracy_threshold}"
            )
        if not self.margin >= 0.0:
            raise InvalidArgumentError(f"margin must be >= 0, got {self.margin}")

    def to_dict(self) -> dict:
        return {
            "accuracy_threshold": self.accuracy_threshold,
            "require_threshold": self.require_threshold,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class SwitchDecision:
    action: Action
    reason: Reason

    @property
    def switched(self) -> bool:
        return self.action is Action.SWITCH_TO_CANDIDATE

    def to_dict(self) -> dict:
        return {"action": self.action.value, "reason": self.reason.value}


def decide(
    current_acc: float, candidate_acc: float, policy: SwitchPolicy
) -> SwitchDecision:
    """
    Apply ``policy`` to a pair of validation accuracies.

    :raises InvalidArgumentError: If an accuracy lies outside [0, 1].
    """
    for name, value in (("current", current_acc), ("candidate", candidate_acc)):
        if not 0.0 <= value <= 1.0:
            raise InvalidArgumentError(
                f"{name} accuracy must be in [0, 1], got {value}"
            )
    if not candidate_acc > current_acc + policy.margin:
        return SwitchDecision(Action.KEEP_CURRENT, Reason.CANDIDATE_NOT_BETTER)
    if policy.require_threshold and not candidate_acc >= policy.accuracy_threshold:
        return SwitchDecision(Action.KEEP_CURRENT, Reason.CANDIDATE_BELOW_THRESHOLD)
    return SwitchDecision(Action.SWITCH_TO_CANDIDATE, Reason.CANDIDATE_BETTER)


@dataclass(frozen=True)
class SwitchReport:
    """
    Audit record of one switching round.

    Accuracies are stored exactly as :func:`~model_switching.metrics.evaluate`
    returned them; rounding happens only in :meth:`log_lines`.
    """

    current_eval: EvalResult
    candidate_eval: EvalResult
    decision: SwitchDecision
    policy: SwitchPolicy
    candidate_trained_on_noisy: bool
    noise_level: float
    current_kind: str = ""
    candidate_kind: str = ""
    elapsed_train_ms: float = field(default=0.0, compare=False)
    elapsed_eval_ms: float = field(default=0.0, compare=False)

    @property
    def current_accuracy(self) -> float:
        return self.current_eval.accuracy

    @property
    def candidate_accuracy(self) -> float:
        return self.candidate_eval.accuracy

    @property
    def retained_kind(self) -> str:
        return self.candidate_kind if self.decision.switched else self.current_kind

    def log_lines(self) -> List[str]:
        """Human-readable outcome, accuracies rounded half-up to two decimals."""
        lines = [
            f"Previous model accuracy: {format_accuracy(self.current_accuracy)}",
            f"New model accuracy: {format_accuracy(self.candidate_accuracy)}",
        ]
        if self.decision.switched:
            lines.append(
                "Switching to a new model with accuracy: "
                f"{format_accuracy(self.candidate_accuracy)}"
            )
        else:
            lines.append(
                "Keeping the current model with accuracy: "
                f"{format_accuracy(self.current_accuracy)}"
            )
        return lines

    def to_dict(self, include_timings: bool = False) -> Dict[str, Any]:
        doc = {
            "current_accuracy": self.current_accuracy,
            "candidate_accuracy": self.candidate_accuracy,
            "current_accuracy_display": format_accuracy(self.current_accuracy),
            "candidate_accuracy_display": format_accuracy(self.candidate_accuracy),
            "current_eval": self.current_eval.to_dict(),
            "candidate_eval": self.candidate_eval.to_dict(),
            "decision": self.decision.to_dict(),
            "policy": self.policy.to_dict(),
            "candidate_trained_on_noisy": self.candidate_trained_on_noisy,
            "noise_level": self.noise_level,
            "current_kind": self.current_kind,
            "candidate_kind": self.candidate_kind,
            "retained_kind": self.retained_kind,
        }
        if include_timings:
            doc["elapsed_train_ms"] = self.elapsed_train_ms
            doc["elapsed_eval_ms"] = self.elapsed_eval_ms
        return doc

    def to_json(self, include_timings: bool = False) -> str:
        doc = self.to_dict(include_timings)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def switch_models(
    current: Classifier,
    train: Dataset,
    val: Dataset,
    policy: SwitchPolicy,
    candidate_trainer: CandidateTrainer,
    candidate_noise: Optional[NoiseSpec] = None,
    rng: Optional[SeededRng] = None,
) -> Tuple[Classifier, SwitchReport]:
    """
    Train a candidate on ``train`` and keep whichever model ``policy`` prefers.

    Both models are scored on the same ``val``; ``val`` is never handed to
    ``candidate_trainer``. With ``candidate_noise`` the candidate trains on a
    copy of ``train`` corrupted by :func:`~model_switching.dataset.add_noise`
    using ``rng``.

    :return: The retained model (``current`` itself or the new candidate) and
        the report.
    :raises InvalidArgumentError: On empty validation data, inconsistent
        widths, or noise without an ``rng``.
    :raises StageError: If candidate training fails.
    """
    if val.n_samples == 0:
        raise InvalidArgumentError("validation set is empty")
    if train.n_features != val.n_features:
        raise InvalidArgumentError(
            f"train has {train.n_features} features but validation has {val.n_features}"
        )
    if candidate_noise is not None and rng is None:
        raise InvalidArgumentError("candidate_noise requires an rng")

    start = time.perf_counter()
    current_eval = evaluate(current, val)
    eval_ms = _elapsed_ms(start)

    start = time.perf_counter()
    noisy = candidate_noise is not None and candidate_noise.level > 0
    training_data = add_noise(train, candidate_noise, rng) if noisy else train
    try:
        candidate = candidate_trainer(training_data)
    except Exception as exc:
        raise StageError("candidate training", detail=str(exc)) from exc
    train_ms = _elapsed_ms(start)

    start = time.perf_counter()
    candidate_eval = evaluate(candidate, val)
    eval_ms += _elapsed_ms(start)

    decision = decide(current_eval.accuracy, candidate_eval.accuracy, policy)
    report = SwitchReport(
        current_eval=current_eval,
        candidate_eval=candidate_eval,
        decision=decision,
        policy=policy,
        candidate_trained_on_noisy=noisy,
        noise_level=candidate_noise.level if candidate_noise is not None else 0.0,
        current_kind=current.kind,
        candidate_kind=candidate.kind,
        elapsed_train_ms=train_ms,
        elapsed_eval_ms=eval_ms,
    )
    logger.info(
        "switch_decided",
        current_accuracy=current_eval.accuracy,
        candidate_accuracy=candidate_eval.accuracy,
        action=decision.action.value,
        reason=decision.reason.value,
        noise_level=report.noise_level,
    )
    return (candidate if decision.switched else current), report


@dataclass(frozen=True)
class SwitchStage:
    """
    One growth step of a switching chain.

    :param rng: Stream for candidate noise; required when ``noise`` is set.
    """

    train: Dataset
    val: Dataset
    policy: SwitchPolicy
    trainer: CandidateTrainer
    noise: Optional[NoiseSpec] = None
    rng: Optional[SeededRng] = None


def switch_chain(
    stages: Sequence[SwitchStage], initial: Classifier
) -> Tuple[Classifier, List[SwitchReport]]:
    """
    Fold :func:`switch_models` over ``stages``, starting from ``initial``.

    :return: The final retained model and one report per stage.
    :raises InvalidArgumentError: If ``stages`` is empty.
    :raises StageError: Carrying the failing stage's index.
    """
    if not stages:
        raise InvalidArgumentError("a switching chain needs at least one stage")
    model = initial
    reports = []
    for index, stage in enumerate(stages):
        try:
            model, report = switch_models(
                model,
                stage.train,
                stage.val,
                stage.policy,
                stage.trainer,
                candidate_noise=stage.noise,
                rng=stage.rng,
            )
        except StageError as exc:
            detail = str(exc.__cause__ or exc)
            raise StageError(exc.stage, index=index, detail=detail) from exc
        except ModelSwitchingError as exc:
            raise StageError("switch", index=index, detail=str(exc)) from exc
        reports.append(report)
    return model, reports
