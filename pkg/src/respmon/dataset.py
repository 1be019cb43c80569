"""Core data types plus manifest and trial-file IO.

A trial is one multi-channel breathing recording for one subject. Trials are
stored as CSV with a fixed header; a cohort is described by a JSON manifest
that points at the trial files and carries per-trial metadata.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from .errors import (
    BadHeader,
    DuplicateTrial,
    IoFailure,
    MissingFile,
    NonMonotoneTime,
    RaggedRow,
    SchemaViolation,
)

TRIAL_HEADER = "time_s,pressure_cmh2o,flow_lps,tidal_volume_l,insp_start,chest_mm,abdomen_mm"

# Measurement channels in canonical order; also the feature-block order.
CHANNEL_NAMES = ("pressure", "flow", "tidal_volume", "chest_circ", "abdomen_circ")

# Relative slack allowed between the median sample interval and 1/fs.
_RATE_TOL = 0.01


class BreathingType(IntEnum):
    """Class labels with stable integer codes."""

    NORMAL = 0
    PANTING = 1
    DEEP = 2

    @classmethod
    def from_name(cls, name: str) -> "BreathingType":
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise SchemaViolation(
                "breathing_type", f"expected normal|panting|deep, got {name!r}"
            ) from None

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class SubjectMeta:
    subject_id: str
    sex: str
    age: int
    height_cm: float
    weight_kg: float
    smoker_or_vaper: bool = False
    asthmatic: bool = False

    def __post_init__(self):
        if not self.subject_id:
            raise SchemaViolation("subject_id", "must be non-empty")
        if self.sex not in ("M", "F"):
            raise SchemaViolation("sex", f"expected 'M' or 'F', got {self.sex!r}")
        if not 0 < int(self.age) < 150:
            raise SchemaViolation("age", f"implausible value {self.age}")
        if not 30.0 <= float(self.height_cm) <= 250.0:
            raise SchemaViolation("height_cm", f"implausible value {self.height_cm}")
        if not 1.0 <= float(self.weight_kg) <= 400.0:
            raise SchemaViolation("weight_kg", f"implausible value {self.weight_kg}")

    def to_json_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "sex": self.sex,
            "age": int(self.age),
            "height_cm": float(self.height_cm),
            "weight_kg": float(self.weight_kg),
            "smoker_or_vaper": bool(self.smoker_or_vaper),
            "asthmatic": bool(self.asthmatic),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SubjectMeta":
        if not isinstance(obj, dict):
            raise SchemaViolation("subject", "must be an object")
        try:
            return cls(
                subject_id=str(obj["subject_id"]),
                sex=str(obj["sex"]),
                age=int(obj["age"]),
                height_cm=float(obj["height_cm"]),
                weight_kg=float(obj["weight_kg"]),
                smoker_or_vaper=bool(obj.get("smoker_or_vaper", False)),
                asthmatic=bool(obj.get("asthmatic", False)),
            )
        except KeyError as exc:
            raise SchemaViolation(f"subject.{exc.args[0]}", "missing") from None
        except (TypeError, ValueError) as exc:
            raise SchemaViolation("subject", str(exc)) from None


@dataclass(frozen=True)
class TrialMeta:
    subject: SubjectMeta
    breathing_type: BreathingType
    peep_cmh2o: float
    fs_hz: float
    duration_s: float | None = None  # filled from the data when loaded

    def __post_init__(self):
        if float(self.peep_cmh2o) < 0:
            raise SchemaViolation("peep_cmh2o", "must be >= 0")
        if not float(self.fs_hz) > 0:
            raise SchemaViolation("fs_hz", "must be > 0")
        if self.duration_s is not None and not float(self.duration_s) > 0:
            raise SchemaViolation("duration_s", "must be > 0")

    @property
    def trial_id(self) -> str:
        return f"{self.subject.subject_id}_{self.breathing_type.label}"


@dataclass(eq=False)
class TrialRecord:
    """One recording: metadata plus aligned per-sample channel arrays."""

    meta: TrialMeta
    time: np.ndarray
    pressure: np.ndarray
    flow: np.ndarray
    tidal_volume: np.ndarray
    chest_circ: np.ndarray
    abdomen_circ: np.ndarray
    insp_starts: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def n_samples(self) -> int:
        return int(self.time.shape[0])

    def channels(self) -> dict[str, np.ndarray]:
        return {
            "pressure": self.pressure,
            "flow": self.flow,
            "tidal_volume": self.tidal_volume,
            "chest_circ": self.chest_circ,
            "abdomen_circ": self.abdomen_circ,
        }

    def validate(self, check_rate: bool = True) -> "TrialRecord":
        """Check the structural invariants; returns self for chaining."""
        n = self.n_samples
        if n < 2:
            raise SchemaViolation("time_s", "trial needs at least 2 samples")
        for name, arr in {"time": self.time, **self.channels()}.items():
            if arr.shape != (n,):
                raise SchemaViolation(name, f"length {arr.shape} != {n}")
        dt = np.diff(self.time)
        if not np.all(dt > 0):
            bad = int(np.argmin(dt > 0))
            raise NonMonotoneTime(bad + 2)
        if check_rate:
            med = float(np.median(dt))
            nominal = 1.0 / float(self.meta.fs_hz)
            if not math.isfinite(med) or abs(med - nominal) > _RATE_TOL * nominal:
                raise SchemaViolation(
                    "fs_hz",
                    f"median sample interval {med:.6g}s vs nominal {nominal:.6g}s",
                )
        s = self.insp_starts
        if s.size:
            if np.any(s < 0) or np.any(s >= n):
                raise SchemaViolation("insp_start", "marker index out of range")
            if np.any(np.diff(s) <= 0):
                raise SchemaViolation("insp_start", "markers must strictly increase")
        return self


@dataclass(frozen=True)
class DatasetManifest:
    provenance: str
    entries: tuple[tuple[str, TrialMeta], ...]

    def __len__(self) -> int:
        return len(self.entries)


def load_manifest(path) -> DatasetManifest:
    """Parse and validate a manifest JSON file.

    Trial paths are resolved relative to the manifest's directory and must
    exist. (subject_id, breathing_type) pairs must be unique.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise IoFailure(path, exc) from exc
    except json.JSONDecodeError as exc:
        raise SchemaViolation("<root>", f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaViolation("<root>", "must be a JSON object")
    if "provenance" not in obj or not isinstance(obj["provenance"], str):
        raise SchemaViolation("provenance", "missing or not a string")
    trials = obj.get("trials")
    if not isinstance(trials, list):
        raise SchemaViolation("trials", "missing or not a list")

    entries: list[tuple[str, TrialMeta]] = []
    seen: set[tuple[str, BreathingType]] = set()
    for i, t in enumerate(trials):
        if not isinstance(t, dict):
            raise SchemaViolation(f"trials[{i}]", "must be an object")
        for key in ("path", "subject", "breathing_type", "peep_cmh2o", "fs_hz"):
            if key not in t:
                raise SchemaViolation(f"trials[{i}].{key}", "missing")
        subject = SubjectMeta.from_json_dict(t["subject"])
        btype = BreathingType.from_name(t["breathing_type"])
        try:
            meta = TrialMeta(
                subject=subject,
                breathing_type=btype,
                peep_cmh2o=float(t["peep_cmh2o"]),
                fs_hz=float(t["fs_hz"]),
            )
        except (TypeError, ValueError) as exc:
            raise SchemaViolation(f"trials[{i}]", str(exc)) from None
        key = (subject.subject_id, btype)
        if key in seen:
            raise DuplicateTrial(subject.subject_id, btype.label)
        seen.add(key)
        rel = str(t["path"])
        full = path.parent / rel
        if not full.is_file():
            raise MissingFile(full)
        entries.append((rel, meta))
    return DatasetManifest(provenance=obj["provenance"], entries=tuple(entries))


def _parse_cell(text: str, row: int) -> float:
    text = text.strip()
    if not text or text.lower() == "nan":
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise RaggedRow(row, f"unparseable value {text!r}") from None


def load_trial(path, meta: TrialMeta) -> TrialRecord:
    """Read one trial CSV into a validated TrialRecord.

    NaN cells are kept as NaN; rows with the wrong column count raise
    RaggedRow with the offending 1-based file line.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoFailure(path, exc) from exc

    lines = text.splitlines()
    if not lines:
        raise BadHeader(TRIAL_HEADER, "")
    header = lines[0].strip()
    if header != TRIAL_HEADER:
        raise BadHeader(TRIAL_HEADER, header)

    rows: list[list[float]] = []
    markers: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise RaggedRow(lineno, f"expected 7 columns, got {len(parts)}")
        vals = [_parse_cell(p, lineno) for p in parts]
        if math.isfinite(vals[4]) and vals[4] != 0:
            markers.append(len(rows))
        rows.append([vals[0], vals[1], vals[2], vals[3], vals[5], vals[6]])

    data = np.asarray(rows, dtype=np.float64).reshape(-1, 6)
    n = data.shape[0]
    record = TrialRecord(
        meta=TrialMeta(
            subject=meta.subject,
            breathing_type=meta.breathing_type,
            peep_cmh2o=meta.peep_cmh2o,
            fs_hz=meta.fs_hz,
            duration_s=n / float(meta.fs_hz),
        ),
        time=data[:, 0],
        pressure=data[:, 1],
        flow=data[:, 2],
        tidal_volume=data[:, 3],
        chest_circ=data[:, 4],
        abdomen_circ=data[:, 5],
        insp_starts=np.asarray(markers, dtype=np.int64),
    )
    return record.validate()


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    return format(x, ".17g")


def write_trial(record: TrialRecord, path) -> None:
    """Write a trial CSV that round-trips through load_trial bit-for-bit."""
    path = Path(path)
    marker = np.zeros(record.n_samples, dtype=np.int64)
    if record.insp_starts.size:
        marker[record.insp_starts] = 1
    cols = (
        record.time,
        record.pressure,
        record.flow,
        record.tidal_volume,
        record.chest_circ,
        record.abdomen_circ,
    )
    out = [TRIAL_HEADER]
    for i in range(record.n_samples):
        t, p, f, v, c, a = (col[i] for col in cols)
        out.append(
            f"{_fmt(t)},{_fmt(p)},{_fmt(f)},{_fmt(v)},{marker[i]},{_fmt(c)},{_fmt(a)}"
        )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise IoFailure(path, exc) from exc


def write_manifest(path, provenance: str, entries: list[tuple[str, TrialMeta]]) -> None:
    """Write a manifest JSON referencing already-written trial files."""
    path = Path(path)
    obj = {
        "provenance": provenance,
        "trials": [
            {
                "path": rel,
                "subject": meta.subject.to_json_dict(),
                "breathing_type": meta.breathing_type.label,
                "peep_cmh2o": float(meta.peep_cmh2o),
                "fs_hz": float(meta.fs_hz),
            }
            for rel, meta in entries
        ],
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(path, exc) from exc
