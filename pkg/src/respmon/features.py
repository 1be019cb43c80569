"""Summary-statistics features computed per window."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import BreathingType, CHANNEL_NAMES
from .errors import DimensionMismatch, EmptyInput, NonFiniteInput
from .preprocess import Window
from .spectral import DEFAULT_BR_BAND, estimate_breathing_rate

STAT_NAMES = ("mean", "std", "min", "max", "rms")

BASE_FEATURE_NAMES = tuple(
    f"{channel}_{stat}" for channel in CHANNEL_NAMES for stat in STAT_NAMES
)
BR_FEATURE_NAME = "br_bpm"

# A window spanning fewer breath cycles than this gets flagged in run reports.
MIN_CYCLES_PER_WINDOW = 2.0


def window_features(window: Window) -> np.ndarray:
    """Per-channel mean, population std, min, max, and RMS, concatenated.

    Channel order follows CHANNEL_NAMES; five statistics per channel give a
    25-dimensional vector.
    """
    values = np.empty(len(BASE_FEATURE_NAMES), dtype=np.float64)
    pos = 0
    for name, arr in window.channels().items():
        if arr.size == 0:
            raise EmptyInput(f"window channel {name} is empty")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInput(f"window channel {name} contains NaN")
        values[pos] = arr.mean()
        values[pos + 1] = arr.std()
        values[pos + 2] = arr.min()
        values[pos + 3] = arr.max()
        values[pos + 4] = np.sqrt(np.mean(arr * arr))
        pos += 5
    return values


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    label: BreathingType
    group_id: str
    trial_id: str


@dataclass(eq=False)
class FeatureMatrix:
    """Window features stacked into arrays ready for model training."""

    X: np.ndarray
    y: np.ndarray
    group_ids: list[str]
    trial_ids: list[str]
    feature_names: list[str]
    includes_br: bool

    @property
    def n_instances(self) -> int:
        return int(self.X.shape[0])

    def rows(self):
        for i in range(self.n_instances):
            yield FeatureVector(
                values=self.X[i],
                label=BreathingType(int(self.y[i])),
                group_id=self.group_ids[i],
                trial_id=self.trial_ids[i],
            )

    def to_csv(self) -> str:
        header = ",".join([*self.feature_names, "label", "group_id", "trial_id"])
        lines = [header]
        for i in range(self.n_instances):
            vals = ",".join(format(v, ".17g") for v in self.X[i])
            label = BreathingType(int(self.y[i])).label
            lines.append(f"{vals},{label},{self.group_ids[i]},{self.trial_ids[i]}")
        return "\n".join(lines) + "\n"


def assemble_matrix(
    windows: list[Window],
    include_br: bool,
    band_hz: tuple[float, float] = DEFAULT_BR_BAND,
    br_channel: str = "tidal_volume",
) -> FeatureMatrix:
    """Stack window features; optionally append a breathing-rate column.

    The rate is estimated from br_channel (tidal volume by default). Windows
    spanning fewer than two estimated breath cycles are counted; the count is
    exposed on the returned matrix as n_short_cycle_windows.
    """
    if not windows:
        raise EmptyInput("no windows to featurize")
    if br_channel not in CHANNEL_NAMES:
        raise EmptyInput(f"unknown channel {br_channel!r}; choose one of {CHANNEL_NAMES}")
    d = len(BASE_FEATURE_NAMES) + (1 if include_br else 0)
    X = np.empty((len(windows), d), dtype=np.float64)
    y = np.empty(len(windows), dtype=np.int64)
    group_ids: list[str] = []
    trial_ids: list[str] = []
    short_cycles = 0
    for i, w in enumerate(windows):
        base = window_features(w)
        if include_br:
            est = estimate_breathing_rate(w.channels()[br_channel], w.fs_hz, band_hz)
            X[i, :-1] = base
            X[i, -1] = est.bpm
            if (w.length / w.fs_hz) * (est.bpm / 60.0) < MIN_CYCLES_PER_WINDOW:
                short_cycles += 1
        else:
            X[i] = base
        y[i] = int(w.label)
        group_ids.append(w.subject_id)
        trial_ids.append(w.trial_id)

    names = list(BASE_FEATURE_NAMES) + ([BR_FEATURE_NAME] if include_br else [])
    matrix = FeatureMatrix(
        X=X,
        y=y,
        group_ids=group_ids,
        trial_ids=trial_ids,
        feature_names=names,
        includes_br=include_br,
    )
    matrix.n_short_cycle_windows = short_cycles
    return matrix


def subset_matrix(matrix: FeatureMatrix, idx: np.ndarray) -> FeatureMatrix:
    """Row-subset view used by evaluation code."""
    idx = np.asarray(idx, dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= matrix.n_instances):
        raise DimensionMismatch("subset indices out of range")
    return FeatureMatrix(
        X=matrix.X[idx],
        y=matrix.y[idx],
        group_ids=[matrix.group_ids[i] for i in idx],
        trial_ids=[matrix.trial_ids[i] for i in idx],
        feature_names=list(matrix.feature_names),
        includes_br=matrix.includes_br,
    )
