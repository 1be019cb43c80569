"""From-scratch classifiers behind a fit/predict estimator interface."""

from .forest import RandomForest
from .io import MODEL_KINDS, load_model, model_from_dict, model_to_dict, save_model
from .logistic import SoftmaxRegression, loss_and_gradient, softmax
from .svm import BinarySvm, RbfSvmClassifier, rbf_gram, rbf_kernel, resolve_gamma, smo_train_binary
from .tree import DecisionTree, SplitChoice, best_split, gini, grow_tree

__all__ = [
    "RandomForest",
    "SoftmaxRegression",
    "RbfSvmClassifier",
    "BinarySvm",
    "DecisionTree",
    "SplitChoice",
    "MODEL_KINDS",
    "best_split",
    "gini",
    "grow_tree",
    "softmax",
    "loss_and_gradient",
    "rbf_kernel",
    "rbf_gram",
    "resolve_gamma",
    "smo_train_binary",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
]
