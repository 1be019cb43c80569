"""Manifest-to-feature-matrix glue shared by the CLI and tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import DatasetManifest, TrialRecord, load_manifest, load_trial
from .errors import AllRowsDropped
from .features import FeatureMatrix, assemble_matrix
from .preprocess import DEFAULT_OVERLAP, DEFAULT_WINDOW_S, drop_nan_rows, segment_windows
from .spectral import DEFAULT_BR_BAND


@dataclass
class PipelineStats:
    n_trials: int = 0
    n_dropped_trials: int = 0
    n_windows: int = 0
    windows_per_class: dict = field(default_factory=dict)
    zero_window_trials: list = field(default_factory=list)
    n_short_cycle_windows: int = 0
    notes: list = field(default_factory=list)


def load_cohort(manifest_path) -> tuple[DatasetManifest, list[TrialRecord]]:
    """Load and validate every trial referenced by a manifest."""
    manifest = load_manifest(manifest_path)
    base = Path(manifest_path).parent
    records = [load_trial(base / rel, meta) for rel, meta in manifest.entries]
    return manifest, records


def build_feature_matrix(
    records: list[TrialRecord],
    include_br: bool,
    window_s: float = DEFAULT_WINDOW_S,
    overlap_fraction: float = DEFAULT_OVERLAP,
    band_hz: tuple[float, float] = DEFAULT_BR_BAND,
    br_channel: str = "tidal_volume",
) -> tuple[FeatureMatrix, PipelineStats]:
    """Clean, window, and featurize a list of trials.

    Trials that lose every sample to NaN removal are skipped with a note, as
    are trials shorter than one window.
    """
    stats = PipelineStats(n_trials=len(records))
    windows = []
    for record in records:
        trial_id = record.meta.trial_id
        try:
            cleaned = drop_nan_rows(record)
        except AllRowsDropped:
            stats.n_dropped_trials += 1
            stats.notes.append(f"trial {trial_id} dropped: no finite samples")
            continue
        ws = segment_windows(cleaned, window_s, overlap_fraction)
        if not ws:
            stats.zero_window_trials.append(trial_id)
            stats.notes.append(f"trial {trial_id} yields no windows at {window_s}s")
            continue
        windows.extend(ws)

    matrix = assemble_matrix(
        windows, include_br=include_br, band_hz=band_hz, br_channel=br_channel
    )
    stats.n_windows = matrix.n_instances
    classes, counts = np.unique(matrix.y, return_counts=True)
    stats.windows_per_class = {int(c): int(k) for c, k in zip(classes, counts)}
    stats.n_short_cycle_windows = getattr(matrix, "n_short_cycle_windows", 0)
    return matrix, stats
