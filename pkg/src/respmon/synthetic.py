"""Synthetic breathing-trial generator.

Produces idealized CPAP-style recordings: a raised-cosine tidal volume, its
analytic derivative as flow, a sinusoidal mask-pressure ripple on top of the
PEEP level, and chest/abdomen circumference traces that follow tidal volume
affinely. Channel noise is Gaussian with a standard deviation given as a
fraction of each channel's noiseless peak-to-peak span.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import BreathingType, SubjectMeta, TrialMeta, TrialRecord
from .errors import InvalidSpec, SchemaViolation
from .seeding import derive_seed

CHEST_OFFSET_MM = 900.0
CHEST_GAIN_MM_PER_L = 40.0
ABDOMEN_OFFSET_MM = 850.0
ABDOMEN_GAIN_MM_PER_L = 30.0

# Per-class defaults: breathing frequency (Hz), tidal amplitude (L), duration (s).
CLASS_DEFAULTS = {
    BreathingType.NORMAL: (0.25, 0.5, 65.0),
    BreathingType.PANTING: (1.5, 0.3, 35.0),
    BreathingType.DEEP: (0.15, 1.5, 65.0),
}

DEFAULT_FS_HZ = 100.0
DEFAULT_PEEP_CMH2O = 4.0
DEFAULT_NOISE_FRACTION = 0.05
DEFAULT_FREQ_JITTER = 0.1
DEFAULT_COHORT_SEED = 101
DEFAULT_N_SUBJECTS = 30


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for one generated trial."""

    breathing_frequency_hz: float
    duration_s: float
    fs_hz: float
    tidal_amplitude_l: float
    peep_cmh2o: float
    noise_std_fraction: float
    seed: int

    def __post_init__(self):
        if not self.duration_s > 0:
            raise InvalidSpec("duration_s must be > 0")
        if not self.fs_hz > 0:
            raise InvalidSpec("fs_hz must be > 0")
        if not 0 < self.breathing_frequency_hz < self.fs_hz / 2:
            raise InvalidSpec(
                "breathing_frequency_hz must lie in (0, fs_hz/2) "
                f"got {self.breathing_frequency_hz} at fs {self.fs_hz}"
            )
        if not self.tidal_amplitude_l > 0:
            raise InvalidSpec("tidal_amplitude_l must be > 0")
        if self.peep_cmh2o < 0:
            raise InvalidSpec("peep_cmh2o must be >= 0")
        if not 0 <= self.noise_std_fraction < 1:
            raise InvalidSpec("noise_std_fraction must lie in [0, 1)")


def generate_synthetic_trial(
    spec: SyntheticSpec, breathing_type: BreathingType, subject: SubjectMeta
) -> TrialRecord:
    """Build one trial deterministically from (spec, breathing_type, subject).

    Channel noise is drawn from a generator seeded with spec.seed, in a fixed
    channel order (tidal volume, flow, pressure, chest, abdomen), so repeated
    calls are bit-identical.
    """
    f = spec.breathing_frequency_hz
    fs = spec.fs_hz
    amp = spec.tidal_amplitude_l
    n = int(round(spec.duration_s * fs))
    if n < 2:
        raise InvalidSpec("duration_s * fs_hz must give at least 2 samples")

    t = np.arange(n, dtype=np.float64) / fs
    phase = 2.0 * np.pi * f * t
    tidal = 0.5 * amp * (1.0 - np.cos(phase))
    flow = amp * np.pi * f * np.sin(phase)  # d(tidal)/dt
    pressure = spec.peep_cmh2o + 0.5 * amp * np.sin(phase)
    chest = CHEST_OFFSET_MM + CHEST_GAIN_MM_PER_L * tidal
    abdomen = ABDOMEN_OFFSET_MM + ABDOMEN_GAIN_MM_PER_L * tidal

    if spec.noise_std_fraction > 0:
        rng = np.random.default_rng(spec.seed)
        for arr in (tidal, flow, pressure, chest, abdomen):
            span = float(arr.max() - arr.min())
            arr += rng.normal(0.0, spec.noise_std_fraction * span, size=n)

    # Inspiration begins at each volume minimum, t = k/f.
    k_max = int(np.floor((n - 1) * f / fs))
    starts = np.unique(np.round(np.arange(k_max + 1) * fs / f).astype(np.int64))
    starts = starts[starts < n]

    meta = TrialMeta(
        subject=subject,
        breathing_type=breathing_type,
        peep_cmh2o=spec.peep_cmh2o,
        fs_hz=fs,
        duration_s=n / fs,
    )
    return TrialRecord(
        meta=meta,
        time=t,
        pressure=pressure,
        flow=flow,
        tidal_volume=tidal,
        chest_circ=chest,
        abdomen_circ=abdomen,
        insp_starts=starts,
    ).validate()


@dataclass(frozen=True)
class CohortSpec:
    """Parameters for a whole synthetic cohort (one trial per class per subject)."""

    n_subjects: int = DEFAULT_N_SUBJECTS
    fs_hz: float = DEFAULT_FS_HZ
    peep_cmh2o: float = DEFAULT_PEEP_CMH2O
    noise_std_fraction: float = DEFAULT_NOISE_FRACTION
    freq_jitter_fraction: float = DEFAULT_FREQ_JITTER
    seed: int = DEFAULT_COHORT_SEED
    class_params: dict = field(
        default_factory=lambda: {bt: CLASS_DEFAULTS[bt] for bt in BreathingType}
    )

    def __post_init__(self):
        if not self.n_subjects >= 1:
            raise InvalidSpec("n_subjects must be >= 1")
        if not 0 <= self.freq_jitter_fraction < 1:
            raise InvalidSpec("freq_jitter_fraction must lie in [0, 1)")

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CohortSpec":
        if not isinstance(obj, dict):
            raise SchemaViolation("<root>", "cohort settings must be an object")
        class_params = {bt: CLASS_DEFAULTS[bt] for bt in BreathingType}
        for name, upd in (obj.get("classes") or {}).items():
            bt = BreathingType.from_name(name)
            f0, a0, d0 = class_params[bt]
            class_params[bt] = (
                float(upd.get("breathing_frequency_hz", f0)),
                float(upd.get("tidal_amplitude_l", a0)),
                float(upd.get("duration_s", d0)),
            )
        try:
            return cls(
                n_subjects=int(obj.get("n_subjects", DEFAULT_N_SUBJECTS)),
                fs_hz=float(obj.get("fs_hz", DEFAULT_FS_HZ)),
                peep_cmh2o=float(obj.get("peep_cmh2o", DEFAULT_PEEP_CMH2O)),
                noise_std_fraction=float(
                    obj.get("noise_std_fraction", DEFAULT_NOISE_FRACTION)
                ),
                freq_jitter_fraction=float(
                    obj.get("freq_jitter_fraction", DEFAULT_FREQ_JITTER)
                ),
                seed=int(obj.get("seed", DEFAULT_COHORT_SEED)),
                class_params=class_params,
            )
        except (TypeError, ValueError) as exc:
            raise SchemaViolation("<root>", str(exc)) from None


def _make_subject(index: int, cohort_seed: int) -> SubjectMeta:
    rng = np.random.default_rng(derive_seed(cohort_seed, 2 * index))
    sex = "M" if index % 2 == 0 else "F"
    age = int(rng.integers(19, 38))
    height = float(np.round(rng.normal(178.0 if sex == "M" else 165.0, 7.0), 1))
    weight = float(np.round(rng.normal(78.0 if sex == "M" else 64.0, 9.0), 1))
    return SubjectMeta(
        subject_id=f"S{index + 1:02d}",
        sex=sex,
        age=age,
        height_cm=min(max(height, 140.0), 210.0),
        weight_kg=min(max(weight, 40.0), 160.0),
        smoker_or_vaper=bool(rng.random() < 0.27),
        asthmatic=bool(rng.random() < 0.07),
    )


def generate_cohort(cohort: CohortSpec) -> list[TrialRecord]:
    """Generate n_subjects x 3 trials with per-subject breathing-rate jitter."""
    records: list[TrialRecord] = []
    for i in range(cohort.n_subjects):
        subject = _make_subject(i, cohort.seed)
        jitter_rng = np.random.default_rng(derive_seed(cohort.seed, 2 * i + 1))
        for bt in BreathingType:
            f0, amp, dur = cohort.class_params[bt]
            u = float(jitter_rng.uniform(-1.0, 1.0))
            spec = SyntheticSpec(
                breathing_frequency_hz=f0 * (1.0 + cohort.freq_jitter_fraction * u),
                duration_s=dur,
                fs_hz=cohort.fs_hz,
                tidal_amplitude_l=amp,
                peep_cmh2o=cohort.peep_cmh2o,
                noise_std_fraction=cohort.noise_std_fraction,
                seed=derive_seed(cohort.seed, 1000 + 3 * i + int(bt)),
            )
            records.append(generate_synthetic_trial(spec, bt, subject))
    return records
