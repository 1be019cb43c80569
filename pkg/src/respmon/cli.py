"""Command-line interface.

Subcommands: generate (synthetic cohort), ingest (assemble a manifest from
canonical trial CSVs), br (trial-level breathing rates), run (the full
windowing / features / cross-validation pipeline with reports and plots).

Exit codes: 0 success, 1 warnings escalated by --strict, 2 errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .crossval import (
    StratificationDegraded,
    cross_validate,
    kfold_splits,
    leave_one_group_out_splits,
    loocv_splits,
)
from .dataset import (
    BreathingType,
    SubjectMeta,
    TrialMeta,
    load_trial,
    write_manifest,
    write_trial,
)
from .errors import RespmonError
from .metrics import roc_to_csv
from .models import RandomForest, RbfSvmClassifier, SoftmaxRegression
from .pipeline import build_feature_matrix, load_cohort
from .preprocess import DEFAULT_OVERLAP, DEFAULT_WINDOW_S, drop_nan_rows
from .spectral import DEFAULT_BR_BAND, br_consensus, periodogram, spectrum_to_csv
from .svgplot import line_chart, stacked_chart
from .synthetic import CohortSpec, generate_cohort

MODEL_ORDER = ("forest", "logreg", "svm")
CLASS_NAMES = [bt.label for bt in BreathingType]

FOREST_GRID_TREES = (50, 100, 200)
FOREST_GRID_DEPTHS = (5, 10, None)


def _build_estimator(kind: str, seed: int, forest_params: dict | None = None):
    if kind == "forest":
        return RandomForest(random_state=seed, **(forest_params or {}))
    if kind == "logreg":
        return SoftmaxRegression()
    if kind == "svm":
        return RbfSvmClassifier(random_state=seed)
    raise RespmonError(f"unknown model kind {kind!r}")


def cmd_generate(args) -> int:
    if args.spec:
        spec_path = Path(args.spec)
        if not spec_path.is_file():
            print(f"error: settings file not found: {spec_path}", file=sys.stderr)
            return 2
        cohort = CohortSpec.from_json_dict(json.loads(spec_path.read_text()))
    else:
        cohort = CohortSpec()

    out = Path(args.out)
    records = generate_cohort(cohort)
    entries = []
    for record in records:
        rel = f"trials/{record.meta.trial_id}.csv"
        write_trial(record, out / rel)
        entries.append((rel, record.meta))
    write_manifest(out / "manifest.json", "synthetic cohort", entries)
    print(f"wrote {len(records)} trials and manifest.json under {out}")
    return 0


def cmd_ingest(args) -> int:
    src = Path(args.src)
    if not src.is_dir():
        print(f"error: source directory not found: {src}", file=sys.stderr)
        return 2
    entries = []
    csvs = sorted(src.glob("*.csv"))
    if not csvs:
        print(f"error: no trial CSV files in {src}", file=sys.stderr)
        return 2
    for csv_path in csvs:
        meta_path = csv_path.with_suffix(".meta.json")
        if not meta_path.is_file():
            print(f"error: missing sidecar {meta_path.name} for {csv_path.name}", file=sys.stderr)
            return 2
        obj = json.loads(meta_path.read_text())
        meta = TrialMeta(
            subject=SubjectMeta.from_json_dict(obj["subject"]),
            breathing_type=BreathingType.from_name(obj["breathing_type"]),
            peep_cmh2o=float(obj["peep_cmh2o"]),
            fs_hz=float(obj["fs_hz"]),
        )
        load_trial(csv_path, meta)  # full validation before the manifest references it
        entries.append((csv_path.name, meta))
    out = Path(args.out) if args.out else src / "manifest.json"
    write_manifest(out, args.provenance, entries)
    print(f"wrote manifest for {len(entries)} trials to {out}")
    return 0


def cmd_br(args) -> int:
    band = (args.br_band_lo, args.br_band_hi)
    manifest, records = load_cohort(args.manifest)
    selected = []
    for record in records:
        if args.subject and record.meta.subject.subject_id != args.subject:
            continue
        if args.type and record.meta.breathing_type != BreathingType.from_name(args.type):
            continue
        selected.append(record)
    if not selected:
        print("error: no trial matches the selector", file=sys.stderr)
        return 2

    print(
        "trial_id,subject_id,breathing_type,pressure_bpm,flow_bpm,tidal_volume_bpm,"
        "consensus_bpm,max_pairwise_diff_bpm"
    )
    for record in selected:
        consensus = br_consensus(record, band)
        per = consensus.per_channel
        print(
            f"{record.meta.trial_id},{record.meta.subject.subject_id},"
            f"{record.meta.breathing_type.label},"
            f"{per['pressure'].bpm:.3f},{per['flow'].bpm:.3f},"
            f"{per['tidal_volume'].bpm:.3f},"
            f"{consensus.consensus_bpm:.3f},{consensus.max_pairwise_diff_bpm:.3f}"
        )
        if args.dump_spectra:
            out = Path(args.dump_spectra)
            out.mkdir(parents=True, exist_ok=True)
            fs = float(record.meta.fs_hz)
            for name, arr in record.channels().items():
                if name in ("pressure", "flow", "tidal_volume"):
                    spectrum = periodogram(arr, fs)
                    (out / f"{record.meta.trial_id}_{name}.csv").write_text(
                        spectrum_to_csv(spectrum)
                    )
    return 0


def _tune_forest(matrix, splits, scaling, seed):
    """Pick (n_trees, max_depth) by cross-validated accuracy on this matrix."""
    table = []
    best = None
    for n_trees in FOREST_GRID_TREES:
        for depth in FOREST_GRID_DEPTHS:
            est = RandomForest(n_trees=n_trees, max_depth=depth, random_state=seed)
            report = cross_validate(est, matrix, splits, scaling=scaling)
            entry = {
                "n_trees": n_trees,
                "max_depth": depth,
                "accuracy_mean": report.accuracy_mean,
            }
            table.append(entry)
            if best is None or entry["accuracy_mean"] > best["accuracy_mean"]:
                best = entry
    params = {"n_trees": best["n_trees"], "max_depth": best["max_depth"]}
    return params, {"grid": table, "selected": params}


def _plot_signals(record, out_dir: Path) -> None:
    panels = [
        ("pressure cmH2O", record.time, record.pressure),
        ("flow L/s", record.time, record.flow),
        ("tidal volume L", record.time, record.tidal_volume),
        ("chest mm", record.time, record.chest_circ),
        ("abdomen mm", record.time, record.abdomen_circ),
    ]
    svg = stacked_chart(panels, f"Recorded channels: {record.meta.trial_id}", "time (s)")
    (out_dir / f"signals_{record.meta.trial_id}.svg").write_text(svg)


def _plot_vtidal_compare(records, out_dir: Path) -> None:
    by_subject: dict[str, dict[BreathingType, object]] = {}
    for record in records:
        by_subject.setdefault(record.meta.subject.subject_id, {})[
            record.meta.breathing_type
        ] = record
    for subject_id in sorted(by_subject):
        have = by_subject[subject_id]
        if len(have) == len(BreathingType):
            series = [
                (bt.label, have[bt].time, have[bt].tidal_volume) for bt in BreathingType
            ]
            svg = line_chart(
                series,
                f"Tidal volume by breathing type: subject {subject_id}",
                "time (s)",
                "tidal volume (L)",
            )
            (out_dir / "vtidal_compare.svg").write_text(svg)
            return


def _plot_rocs(report, model: str, out_dir: Path, suffix: str) -> None:
    for k, curve in report.class_curves.items():
        name = CLASS_NAMES[k] if k < len(CLASS_NAMES) else str(k)
        svg = line_chart(
            [(f"{model} vs rest", curve.fpr, curve.tpr)],
            f"ROC: {model}, class {name} (AUC {report.class_aucs[k]:.3f})",
            "false positive rate",
            "true positive rate",
            diagonal=True,
            xlim=(0.0, 1.0),
            ylim=(0.0, 1.0),
        )
        (out_dir / f"roc_{model}_{name}{suffix}.svg").write_text(svg)
        (out_dir / f"roc_{model}_{name}{suffix}.csv").write_text(roc_to_csv(curve))


def cmd_run(args) -> int:
    out_dir = Path(args.out)
    band = (args.br_band_lo, args.br_band_hi)
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    for m in models:
        if m not in MODEL_ORDER:
            print(f"error: unknown model {m!r}; choose from {','.join(MODEL_ORDER)}", file=sys.stderr)
            return 2
    br_variants = {"true": [True], "false": [False], "both": [False, True]}[args.include_br]

    manifest, records = load_cohort(args.manifest)
    run_warnings: list[str] = []
    results = []
    grids = {}

    config_echo = {
        "manifest": str(args.manifest),
        "window_s": args.window_s,
        "overlap": args.overlap,
        "br_band_lo": args.br_band_lo,
        "br_band_hi": args.br_band_hi,
        "br_channel": args.br_channel,
        "include_br": args.include_br,
        "models": models,
        "splitter": args.splitter,
        "k": args.k,
        "stratified": not args.no_stratified,
        "group_by_subject": args.group_by_subject,
        "scaling": not args.no_scaling,
        "seed": args.seed,
        "strict": args.strict,
        "tune_forest": args.tune_forest,
    }

    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_stats = None
    for include_br in br_variants:
        matrix, stats = build_feature_matrix(
            records,
            include_br=include_br,
            window_s=args.window_s,
            overlap_fraction=args.overlap,
            band_hz=band,
            br_channel=args.br_channel,
        )
        if dataset_stats is None:
            dataset_stats = {
                "n_trials": stats.n_trials,
                "n_dropped_trials": stats.n_dropped_trials,
                "n_windows": stats.n_windows,
                "windows_per_class": {
                    CLASS_NAMES[c]: n for c, n in stats.windows_per_class.items()
                },
                "zero_window_trials": stats.zero_window_trials,
            }
        if include_br:
            dataset_stats["n_short_cycle_windows"] = stats.n_short_cycle_windows
        run_warnings.extend(stats.notes)

        split_plans = []
        if args.splitter == "loocv":
            split_plans.append(("loocv", loocv_splits(matrix.n_instances)))
            if args.group_by_subject:
                split_plans.append(
                    ("leave-one-subject-out", leave_one_group_out_splits(matrix.group_ids))
                )
        else:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", StratificationDegraded)
                splits = kfold_splits(
                    matrix.y, args.k, seed=args.seed, stratified=not args.no_stratified
                )
            for w in caught:
                run_warnings.append(str(w.message))
            split_plans.append((f"kfold-{args.k}", splits))

        suffix = ("" if len(br_variants) == 1 else ("_withbr" if include_br else "_nobr"))
        fname = "features_with_br.csv" if include_br else "features_without_br.csv"
        (out_dir / fname).write_text(matrix.to_csv())

        for splitter_name, splits in split_plans:
            for model_kind in models:
                forest_params = None
                if model_kind == "forest" and args.tune_forest:
                    forest_params, grid_info = _tune_forest(
                        matrix, splits, not args.no_scaling, args.seed
                    )
                    grids[f"forest{suffix}_{splitter_name}"] = grid_info
                estimator = _build_estimator(model_kind, args.seed, forest_params)
                fold_config = {
                    "model": model_kind,
                    "includes_br": include_br,
                    "splitter": splitter_name,
                    "hyperparams": estimator.get_params(),
                }
                report = cross_validate(
                    estimator,
                    matrix,
                    splits,
                    scaling=not args.no_scaling,
                    config=fold_config,
                )
                run_warnings.extend(report.warnings)
                results.append(report.to_json_dict(class_names=CLASS_NAMES))
                if splitter_name == split_plans[0][0]:
                    _plot_rocs(report, model_kind, out_dir, suffix)

    cleaned = []
    for record in records:
        try:
            cleaned.append(drop_nan_rows(record))
        except RespmonError:
            continue
    if cleaned:
        _plot_signals(cleaned[0], out_dir)
        _plot_vtidal_compare(cleaned, out_dir)

    report_obj = {
        "config": config_echo,
        "dataset": dataset_stats,
        "results": results,
        "warnings": sorted(set(run_warnings)),
    }
    if grids:
        report_obj["forest_grid"] = grids
    (out_dir / "report.json").write_text(
        json.dumps(report_obj, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote report.json and plots under {out_dir}")
    if args.strict and run_warnings:
        for w in sorted(set(run_warnings)):
            print(f"warning: {w}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="respmon",
        description="Breathing-type classification for CPAP-style respiratory recordings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a synthetic cohort and its manifest")
    p_gen.add_argument("--spec", help="JSON file with cohort settings (defaults used if omitted)")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.set_defaults(func=cmd_generate)

    p_ing = sub.add_parser("ingest", help="validate canonical trial CSVs and build a manifest")
    p_ing.add_argument("--src", required=True, help="directory of trial CSVs with .meta.json sidecars")
    p_ing.add_argument("--out", help="manifest path (default <src>/manifest.json)")
    p_ing.add_argument("--provenance", default="ingested recordings", help="provenance note for the manifest")
    p_ing.set_defaults(func=cmd_ingest)

    p_br = sub.add_parser("br", help="print per-trial breathing-rate estimates as CSV")
    p_br.add_argument("--manifest", required=True)
    p_br.add_argument("--subject", help="restrict to one subject id")
    p_br.add_argument("--type", help="restrict to one breathing type (normal|panting|deep)")
    p_br.add_argument("--br-band-lo", type=float, default=DEFAULT_BR_BAND[0])
    p_br.add_argument("--br-band-hi", type=float, default=DEFAULT_BR_BAND[1])
    p_br.add_argument("--dump-spectra", help="directory for per-channel spectrum CSV dumps")
    p_br.set_defaults(func=cmd_br)

    p_run = sub.add_parser("run", help="full pipeline: windows, features, CV, reports, plots")
    p_run.add_argument("--manifest", required=True)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, required=True, help="master seed for splits and models")
    p_run.add_argument("--window-s", type=float, default=DEFAULT_WINDOW_S)
    p_run.add_argument("--overlap", type=float, default=DEFAULT_OVERLAP)
    p_run.add_argument("--br-band-lo", type=float, default=DEFAULT_BR_BAND[0])
    p_run.add_argument("--br-band-hi", type=float, default=DEFAULT_BR_BAND[1])
    p_run.add_argument(
        "--br-channel",
        default="tidal_volume",
        choices=["pressure", "flow", "tidal_volume", "chest_circ", "abdomen_circ"],
        help="channel feeding the breathing-rate feature",
    )
    p_run.add_argument("--include-br", choices=["true", "false", "both"], default="both")
    p_run.add_argument("--models", default=",".join(MODEL_ORDER), help="comma list: forest,logreg,svm")
    p_run.add_argument("--splitter", choices=["loocv", "kfold"], default="kfold")
    p_run.add_argument("--k", type=int, default=5, help="folds for --splitter kfold")
    p_run.add_argument("--no-stratified", action="store_true", help="plain shuffled folds")
    p_run.add_argument("--group-by-subject", action="store_true", help="add leave-one-subject-out results to loocv runs")
    p_run.add_argument("--no-scaling", action="store_true", help="skip per-fold standardization")
    p_run.add_argument("--tune-forest", action="store_true", help="grid-search forest size/depth by CV accuracy")
    p_run.add_argument("--strict", action="store_true", help="exit 1 when any warning was recorded")
    p_run.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RespmonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
