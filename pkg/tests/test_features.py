import numpy as np
import pytest

from helpers import raw_record, sine_trial
from respmon.dataset import BreathingType, CHANNEL_NAMES
from respmon.errors import EmptyInput
from respmon.features import (
    BASE_FEATURE_NAMES,
    BR_FEATURE_NAME,
    STAT_NAMES,
    assemble_matrix,
    window_features,
)
from respmon.preprocess import segment_windows


def test_feature_name_layout():
    assert len(BASE_FEATURE_NAMES) == 25
    assert BASE_FEATURE_NAMES[0] == f"{CHANNEL_NAMES[0]}_{STAT_NAMES[0]}"
    for ch in CHANNEL_NAMES:
        for stat in STAT_NAMES:
            assert f"{ch}_{stat}" in BASE_FEATURE_NAMES


def test_constant_window_stats():
    rec = raw_record(np.full(300, -2.5))
    w = segment_windows(rec, 1.0, 0.0)[0]
    vec = window_features(w)
    names = list(BASE_FEATURE_NAMES)
    for ch in CHANNEL_NAMES:
        assert vec[names.index(f"{ch}_mean")] == -2.5
        assert vec[names.index(f"{ch}_std")] == 0.0
        assert vec[names.index(f"{ch}_min")] == -2.5
        assert vec[names.index(f"{ch}_max")] == -2.5
        assert vec[names.index(f"{ch}_rms")] == 2.5


def test_two_point_window_stats():
    rec = raw_record(np.tile([-1.0, 1.0], 50))
    w = segment_windows(rec, 0.02, 0.0)[0]
    vec = window_features(w)
    names = list(BASE_FEATURE_NAMES)
    for ch in CHANNEL_NAMES:
        assert vec[names.index(f"{ch}_mean")] == 0.0
        assert vec[names.index(f"{ch}_std")] == 1.0
        assert vec[names.index(f"{ch}_min")] == -1.0
        assert vec[names.index(f"{ch}_max")] == 1.0
        assert vec[names.index(f"{ch}_rms")] == 1.0


def test_window_features_deterministic():
    rec = sine_trial(duration=30.0, noise=0.1, seed=4)
    w = segment_windows(rec)[1]
    assert np.array_equal(window_features(w), window_features(w))


def test_matrix_shapes():
    wins = segment_windows(sine_trial(duration=65.0))
    assert len(wins) == 12
    plain = assemble_matrix(wins, include_br=False)
    assert plain.X.shape == (12, 25)
    assert plain.feature_names == list(BASE_FEATURE_NAMES)
    assert not plain.includes_br

    with_br = assemble_matrix(wins, include_br=True)
    assert with_br.X.shape == (12, 26)
    assert with_br.feature_names[-1] == BR_FEATURE_NAME
    assert with_br.includes_br


def test_br_column_tracks_generator_frequency():
    wins = segment_windows(sine_trial(f=0.25, duration=65.0, noise=0.0))
    m = assemble_matrix(wins, include_br=True)
    assert np.all(np.abs(m.X[:, -1] - 15.0) <= 0.5)
    assert m.n_short_cycle_windows == 0


def test_short_cycle_counter():
    # 0.1 Hz in a 10 s window is a single cycle, below the 2-cycle floor
    wins = segment_windows(sine_trial(f=0.1, duration=65.0, noise=0.0))
    m = assemble_matrix(wins, include_br=True)
    assert m.n_short_cycle_windows == len(wins)


def test_matrix_bookkeeping_columns():
    wins = segment_windows(sine_trial(duration=65.0, bt=BreathingType.DEEP))
    m = assemble_matrix(wins, include_br=False)
    assert m.y.tolist() == [int(BreathingType.DEEP)] * 12
    assert set(m.group_ids) == {"s01"}
    assert set(m.trial_ids) == {"s01_deep"}


def test_matrix_csv_header():
    wins = segment_windows(sine_trial(duration=65.0))
    m = assemble_matrix(wins, include_br=True)
    lines = m.to_csv().strip().splitlines()
    head = lines[0].split(",")
    assert head[:26] == m.feature_names
    assert head[26:] == ["label", "group_id", "trial_id"]
    assert len(lines) == 13
    assert lines[1].split(",")[27] == "s01"


def test_empty_inputs():
    with pytest.raises(EmptyInput):
        assemble_matrix([], include_br=False)
    wins = segment_windows(sine_trial(duration=65.0))
    with pytest.raises(EmptyInput):
        assemble_matrix(wins, include_br=True, br_channel="airway")
