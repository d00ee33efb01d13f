"""
Versioned JSON model files.

    {
      "format_version": 1,
      "model_kind": "random_forest" | "boosted_trees" | "linear_svm" | "decision_tree",
      "params": {...hyperparameters...},
      "learned_state": {...}
    }

Floats are written with ``repr`` precision, so a load reproduces the saved
model's predictions exactly. Files with a newer ``format_version`` than this
build understands are rejected.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from .classifier import Classifier
from .errors import ModelFormatError
from .learners import MODEL_KINDS, PARAMS_TYPES

FORMAT_VERSION = 1

PathLike = Union[str, Path]


def model_to_dict(model: Classifier) -> Dict[str, Any]:
    """The JSON document for a fitted model."""
    if not model.is_fitted:
        raise ModelFormatError(f"cannot serialize an unfitted {model.kind} model")
    return {
        "format_version": FORMAT_VERSION,
        "model_kind": model.kind,
        "params": model.params.to_dict(),
        "learned_state": model.get_state(),
    }


def model_from_dict(doc: Dict[str, Any]) -> Classifier:
    """
    Rebuild a fitted model from its JSON document.

    :raises ModelFormatError: On unknown kinds, future versions, or malformed
        content.
    """
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    version = doc.get("format_version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        raise ModelFormatError(f"invalid format_version {version!r}")
    if version > FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported format_version {version} "
            f"(this build reads up to {FORMAT_VERSION})"
        )
    kind = doc.get("model_kind")
    if kind not in MODEL_KINDS:
        raise ModelFormatError(f"unknown model_kind {kind!r}")
    try:
        params = PARAMS_TYPES[kind].from_dict(doc["params"])
        return MODEL_KINDS[kind].from_state(params, doc["learned_state"])
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed {kind} model: {exc}") from exc


def dumps_model(model: Classifier) -> str:
    return json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n"


def save_model(model: Classifier, path: PathLike) -> None:
    """Write ``model`` to ``path`` as JSON."""
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: PathLike) -> Classifier:
    """
    Read a model written by :func:`save_model`.

    :raises ModelFormatError: If the file is not a valid model document.
    :raises OSError: If the file cannot be read.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(doc)
