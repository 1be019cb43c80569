"""Cleaning, standardization, and fixed-length windowing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .dataset import BreathingType, TrialRecord
from .errors import AllRowsDropped, InvalidOverlap, NonFiniteInput, TooShort
from .validation import as_float_matrix, check_n_features

# Columns this close to constant keep their raw values instead of blowing up.
STD_FLOOR = 1e-12

DEFAULT_WINDOW_S = 10.0
DEFAULT_OVERLAP = 0.5


def drop_nan_rows(record: TrialRecord) -> TrialRecord:
    """Remove every sample where any channel (or the clock) is not finite.

    Inspiration markers on removed rows are dropped; the rest are re-indexed
    to the compacted sample positions. Raises AllRowsDropped when fewer than
    two samples survive.
    """
    stack = np.column_stack([record.time, *record.channels().values()])
    keep_mask = np.all(np.isfinite(stack), axis=1)
    kept = np.nonzero(keep_mask)[0]
    if kept.size < 2:
        raise AllRowsDropped(
            f"{kept.size} of {record.n_samples} samples survive NaN removal"
        )
    starts = record.insp_starts
    if starts.size:
        surviving = starts[keep_mask[starts]]
        new_starts = np.searchsorted(kept, surviving).astype(np.int64)
    else:
        new_starts = starts
    return TrialRecord(
        meta=record.meta,
        time=record.time[kept],
        pressure=record.pressure[kept],
        flow=record.flow[kept],
        tidal_volume=record.tidal_volume[kept],
        chest_circ=record.chest_circ[kept],
        abdomen_circ=record.abdomen_circ[kept],
        insp_starts=new_starts,
    )


class ZScoreScaler(BaseEstimator, TransformerMixin):
    """Column-wise standardization with population statistics.

    Means and standard deviations come from the data given to fit (divisor n,
    not n-1). Columns whose standard deviation falls below 1e-12 are recorded
    with scale 1 so constant features pass through centered but unscaled.
    """

    def fit(self, X, y=None):
        X = as_float_matrix(X)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std < STD_FLOOR, 1.0, std)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        if not hasattr(self, "mean_"):
            raise NotFittedError("ZScoreScaler.fit must run before transform")
        X = as_float_matrix(X, allow_empty=True)
        check_n_features(self.n_features_in_, X)
        return (X - self.mean_) / self.scale_


@dataclass(eq=False)
class Window:
    """A fixed-length slice of one trial, carrying its label and origin."""

    subject_id: str
    breathing_type: BreathingType
    start_index: int
    length: int
    fs_hz: float
    pressure: np.ndarray
    flow: np.ndarray
    tidal_volume: np.ndarray
    chest_circ: np.ndarray
    abdomen_circ: np.ndarray

    @property
    def label(self) -> BreathingType:
        return self.breathing_type

    @property
    def trial_id(self) -> str:
        return f"{self.subject_id}_{self.breathing_type.label}"

    def channels(self) -> dict[str, np.ndarray]:
        return {
            "pressure": self.pressure,
            "flow": self.flow,
            "tidal_volume": self.tidal_volume,
            "chest_circ": self.chest_circ,
            "abdomen_circ": self.abdomen_circ,
        }


def segment_windows(
    record: TrialRecord,
    window_s: float = DEFAULT_WINDOW_S,
    overlap_fraction: float = DEFAULT_OVERLAP,
) -> list[Window]:
    """Cut a cleaned trial into equal-length windows.

    Window length is round(window_s * fs) samples; the stride between starts
    is round(length * (1 - overlap_fraction)), floored at one sample. A trial
    shorter than one window yields an empty list. The input must already be
    NaN-free (see drop_nan_rows).
    """
    if not 0 <= overlap_fraction < 1:
        raise InvalidOverlap(f"overlap_fraction must lie in [0, 1), got {overlap_fraction}")
    fs = float(record.meta.fs_hz)
    length = int(round(window_s * fs))
    if length < 2:
        raise TooShort(f"window of {length} samples is too short ({window_s}s at {fs}Hz)")
    stride = max(1, int(round(length * (1.0 - overlap_fraction))))

    channels = record.channels()
    for name, arr in channels.items():
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInput(f"channel {name} still contains NaN; clean the trial first")

    n = record.n_samples
    windows: list[Window] = []
    for start in range(0, n - length + 1, stride):
        sl = slice(start, start + length)
        windows.append(
            Window(
                subject_id=record.meta.subject.subject_id,
                breathing_type=record.meta.breathing_type,
                start_index=start,
                length=length,
                fs_hz=fs,
                pressure=record.pressure[sl],
                flow=record.flow[sl],
                tidal_volume=record.tidal_volume[sl],
                chest_circ=record.chest_circ[sl],
                abdomen_circ=record.abdomen_circ[sl],
            )
        )
    return windows
