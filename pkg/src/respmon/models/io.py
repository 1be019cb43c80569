"""Versioned JSON persistence for trained models.

Floats survive the round trip exactly (JSON text keeps repr precision), so a
reloaded model reproduces its predictions bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import IoFailure, SchemaViolation
from .forest import RandomForest
from .logistic import SoftmaxRegression
from .svm import BinarySvm, RbfSvmClassifier
from .tree import DecisionTree

FORMAT_VERSION = 1

MODEL_KINDS = {
    "forest": RandomForest,
    "logreg": SoftmaxRegression,
    "svm": RbfSvmClassifier,
}


def kind_of(model) -> str:
    for kind, cls in MODEL_KINDS.items():
        if isinstance(model, cls):
            return kind
    raise SchemaViolation("model", f"unknown model type {type(model).__name__}")


def _tree_to_dict(tree: DecisionTree) -> dict:
    return {
        "n_classes": tree.n_classes,
        "feature": list(tree.feature),
        "threshold": [float(t) for t in tree.threshold],
        "left": list(tree.left),
        "right": list(tree.right),
        "counts": [c if c is None else [int(v) for v in c] for c in tree.counts],
    }


def _tree_from_dict(obj: dict) -> DecisionTree:
    tree = DecisionTree(int(obj["n_classes"]))
    tree.feature = [int(v) for v in obj["feature"]]
    tree.threshold = [float(v) for v in obj["threshold"]]
    tree.left = [int(v) for v in obj["left"]]
    tree.right = [int(v) for v in obj["right"]]
    tree.counts = [c if c is None else [int(v) for v in c] for c in obj["counts"]]
    tree.label = [-1 if c is None else int(np.argmax(c)) for c in tree.counts]
    return tree


def model_to_dict(model) -> dict:
    kind = kind_of(model)
    out = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "hyperparams": model.get_params(),
        "n_classes": int(model.n_classes_),
        "n_features": int(model.n_features_in_),
    }
    if kind == "forest":
        out["trees"] = [_tree_to_dict(t) for t in model.trees_]
    elif kind == "logreg":
        out["weights"] = model.weights_.tolist()
        out["converged"] = bool(model.converged_)
        out["final_loss"] = float(model.final_loss_)
        out["n_iter"] = int(model.n_iter_)
    else:
        out["gamma_resolved"] = float(model.gamma_)
        out["machines"] = [
            {
                "sv_x": m.sv_x.tolist(),
                "sv_coef": m.sv_coef.tolist(),
                "bias": float(m.bias),
                "gamma": float(m.gamma),
                "alphas": m.alphas.tolist(),
                "sweeps": int(m.sweeps),
                "converged": bool(m.converged),
            }
            for m in model.machines_
        ]
    return out


def model_from_dict(obj: dict):
    if not isinstance(obj, dict):
        raise SchemaViolation("<root>", "model file must hold a JSON object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise SchemaViolation("format_version", f"expected {FORMAT_VERSION}, got {version}")
    kind = obj.get("kind")
    if kind not in MODEL_KINDS:
        raise SchemaViolation("kind", f"unknown model kind {kind!r}")
    model = MODEL_KINDS[kind](**obj["hyperparams"])
    model.n_classes_ = int(obj["n_classes"])
    model.classes_ = np.arange(model.n_classes_)
    model.n_features_in_ = int(obj["n_features"])
    if kind == "forest":
        model.trees_ = [_tree_from_dict(t) for t in obj["trees"]]
    elif kind == "logreg":
        model.weights_ = np.asarray(obj["weights"], dtype=np.float64)
        model.converged_ = bool(obj["converged"])
        model.final_loss_ = float(obj["final_loss"])
        model.n_iter_ = int(obj["n_iter"])
    else:
        model.gamma_ = float(obj["gamma_resolved"])
        model.machines_ = [
            BinarySvm(
                sv_x=np.asarray(m["sv_x"], dtype=np.float64).reshape(-1, model.n_features_in_),
                sv_coef=np.asarray(m["sv_coef"], dtype=np.float64),
                bias=float(m["bias"]),
                gamma=float(m["gamma"]),
                alphas=np.asarray(m["alphas"], dtype=np.float64),
                sweeps=int(m["sweeps"]),
                converged=bool(m["converged"]),
            )
            for m in obj["machines"]
        ]
    return model


def save_model(model, path) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(model_to_dict(model), sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(path, exc) from exc


def load_model(path):
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        from ..errors import MissingFile

        raise MissingFile(path) from None
    except OSError as exc:
        raise IoFailure(path, exc) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("<root>", f"not valid JSON: {exc}") from None
    return model_from_dict(obj)
