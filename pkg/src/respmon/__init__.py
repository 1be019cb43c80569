"""Breathing-type classification for CPAP-style respiratory recordings.

The package takes multi-channel breathing trials (mask pressure, flow, tidal
volume, chest and abdomen circumference), cleans and windows them, derives
summary-statistic features with an optional spectral breathing-rate column,
and evaluates three from-scratch classifiers under cross-validation.
"""

from .crossval import (
    CvReport,
    Split,
    cross_validate,
    kfold_splits,
    leave_one_group_out_splits,
    loocv_splits,
)
from .dataset import (
    BreathingType,
    DatasetManifest,
    SubjectMeta,
    TrialMeta,
    TrialRecord,
    load_manifest,
    load_trial,
    write_manifest,
    write_trial,
)
from .features import FeatureMatrix, FeatureVector, assemble_matrix, window_features
from .metrics import RocCurve, accuracy, auc, confusion_matrix, ovr_roc, roc_curve
from .models import (
    RandomForest,
    RbfSvmClassifier,
    SoftmaxRegression,
    load_model,
    save_model,
)
from .pipeline import build_feature_matrix, load_cohort
from .preprocess import Window, ZScoreScaler, drop_nan_rows, segment_windows
from .spectral import (
    BrConsensus,
    BrEstimate,
    Spectrum,
    br_consensus,
    estimate_breathing_rate,
    fft_radix2,
    periodogram,
)
from .synthetic import CohortSpec, SyntheticSpec, generate_cohort, generate_synthetic_trial

__version__ = "0.1.0"

__all__ = [
    "BreathingType",
    "SubjectMeta",
    "TrialMeta",
    "TrialRecord",
    "DatasetManifest",
    "SyntheticSpec",
    "CohortSpec",
    "Window",
    "ZScoreScaler",
    "FeatureMatrix",
    "FeatureVector",
    "Spectrum",
    "BrEstimate",
    "BrConsensus",
    "RocCurve",
    "CvReport",
    "Split",
    "RandomForest",
    "SoftmaxRegression",
    "RbfSvmClassifier",
    "load_manifest",
    "load_trial",
    "write_manifest",
    "write_trial",
    "generate_synthetic_trial",
    "generate_cohort",
    "drop_nan_rows",
    "segment_windows",
    "window_features",
    "assemble_matrix",
    "build_feature_matrix",
    "load_cohort",
    "fft_radix2",
    "periodogram",
    "estimate_breathing_rate",
    "br_consensus",
    "accuracy",
    "confusion_matrix",
    "roc_curve",
    "auc",
    "ovr_roc",
    "loocv_splits",
    "kfold_splits",
    "leave_one_group_out_splits",
    "cross_validate",
    "save_model",
    "load_model",
]
