"""Command-line interface: infer, synth, and eval subcommands.

Exit codes: 0 success, 2 schema or scenario error, 3 degenerate data
(sequences too short, skeleton frames without visible joints, unreadable
corpus entries).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import formats, report, synth
from .aggregate import decide_sum, decide_threshold, score_batch
from .concepts import VARIANTS, run_pipeline, smooth_labels, variant_config
from .config import OCCLUSION_MODE_OF_FLAG, RunConfig
from .errors import (
    DegenerateFrame,
    InvalidScenario,
    MotionIntentError,
    SchemaError,
    SeriesTooShort,
)
from .skeleton import WeightTable, center_of_mass, occlude, occlude_batch

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_DEGENERATE = 3

OCCLUSION_SWEEP = ("none", "all", "agent", "frame")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionintent",
        description=(
            "Label 3D center-of-mass motion as intentional or non-intentional "
            "using physics-grounded rules; no training data involved."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    infer = sub.add_parser(
        "infer", help="label one trajectory (CSV) or skeleton sequence (JSON)"
    )
    infer.add_argument("input", help="trajectory .csv or skeleton .json file")
    infer.add_argument("--out", default=None,
                       help="result JSON path (default: <input>.result.json)")
    infer.add_argument("--svg", default=None, metavar="PATH",
                       help="write an SVG intentionality bar")
    infer.add_argument("--figure", default=None, metavar="PATH",
                       help="write a matplotlib diagnostics figure (PNG)")
    _add_config_flags(infer)

    syn = sub.add_parser("synth", help="generate synthetic scenarios or a corpus")
    syn.add_argument("--out", required=True, help="output directory")
    syn.add_argument("--suite", action="store_true",
                     help="write the full benchmark corpus")
    syn.add_argument("--n-per-kind", type=int, default=10)
    syn.add_argument("--kind", default=None, choices=synth.KINDS,
                     help="single-scenario mode: which scenario to generate")
    syn.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="scenario parameter override (repeatable)")
    syn.add_argument("--dt", type=float, default=None)
    syn.add_argument("--g", type=float, default=None)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--noise-sigma", type=float, default=0.0)
    syn.add_argument("--skeleton", action="store_true",
                     help="emit skeleton JSON instead of trajectory CSV")
    syn.add_argument("--template", default="mocap21", choices=("mocap21", "pose25"))

    ev = sub.add_parser("eval", help="run the pipeline over a corpus and score it")
    ev.add_argument("corpus", help="corpus directory")
    ev.add_argument("--out", default=None,
                    help="metrics JSON path (default: <corpus>/metrics.json)")
    ev.add_argument("--variant-sweep", action="store_true",
                    help="evaluate every rule subset (c1, c12, c123, c124, full)")
    ev.add_argument("--occlude-sweep", action="store_true",
                    help="evaluate occlusion modes none/all/agent/frame")
    ev.add_argument("--report-dir", default=None,
                    help="write CSV tables and matplotlib figures here")
    _add_config_flags(ev)

    return parser


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, metavar="PATH",
                     help="JSON config file; flags override its values")
    sub.add_argument("--variant", default=None, choices=VARIANTS)
    sub.add_argument("--prior", default=None,
                     choices=("intent", "nonintent", "unknown"))
    sub.add_argument("--g", type=float, default=None)
    sub.add_argument("--median-window", type=int, default=None)
    sub.add_argument("--agg", default=None, choices=("sum", "threshold"))
    sub.add_argument("--agg-threshold", type=int, default=None)
    sub.add_argument("--agg-threshold-seconds", type=float, default=None)
    sub.add_argument("--weights", default=None, metavar="PATH",
                     help="weight table JSON (default: bundled 21-joint table)")
    sub.add_argument("--occlude", default=None,
                     choices=("none", "all", "agent", "frame"))
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--eps-energy", type=float, default=None)
    sub.add_argument("--eps-accel", type=float, default=None)
    sub.add_argument("--lookback", type=int, default=None)
    sub.add_argument("--smooth-labels", type=int, default=None, metavar="WINDOW",
                     help="presentation-only median filter over labels")

_PRIOR_OF_FLAG = {"intent": "intentional", "nonintent": "non-intentional",
                  "unknown": "unknown"}


def _run_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    prior = _PRIOR_OF_FLAG.get(args.prior) if args.prior else None
    return cfg.with_overrides(
        variant=args.variant,
        prior=prior,
        g=args.g,
        median_window=args.median_window,
        agg=args.agg,
        agg_threshold=args.agg_threshold,
        agg_threshold_seconds=args.agg_threshold_seconds,
        weights=args.weights,
        occlude=args.occlude,
        seed=args.seed,
        eps_energy=args.eps_energy,
        eps_accel=args.eps_accel,
        lookback=args.lookback,
        smooth_labels=args.smooth_labels,
    )


def _weight_table(cfg: RunConfig) -> WeightTable:
    if cfg.weights:
        return WeightTable.load(cfg.weights)
    return WeightTable.preset()


def _load_input(path, cfg: RunConfig):
    """Read a trajectory or skeleton input file into a Trajectory."""
    if path.endswith(".csv"):
        if cfg.occlude != "none":
            raise SchemaError("--occlude requires skeleton input, not a CSV trajectory")
        return formats.read_trajectory_csv(path)
    if path.endswith(".json"):
        seq = formats.read_skeleton_json(path)
        if cfg.occlude != "none":
            seq = occlude(seq, OCCLUSION_MODE_OF_FLAG[cfg.occlude], cfg.seed)
        return center_of_mass(seq, _weight_table(cfg))
    raise SchemaError(f"{path}: expected a .csv trajectory or .json skeleton file")


def _decide(signal, cfg: RunConfig, dt: float):
    if cfg.agg == "sum":
        return decide_sum([signal], allow_unlabeled=cfg.allow_unlabeled())
    return decide_threshold(
        signal,
        min_frames=cfg.threshold_frames(dt),
        allow_unlabeled=cfg.allow_unlabeled(),
    )


def cmd_infer(args) -> int:
    cfg = _run_config(args)
    traj = _load_input(args.input, cfg)
    result = run_pipeline(
        traj, cfg.concept_config(), g=cfg.g, median_window=cfg.median_window
    )
    decision = _decide(result.signal, cfg, traj.dt)
    smoothed = (
        smooth_labels(result.signal, cfg.smooth_labels)
        if cfg.smooth_labels > 0 else None
    )
    payload = formats.result_payload(result, decision, traj.dt, smoothed=smoothed)
    out = args.out or f"{os.path.splitext(args.input)[0]}.result.json"
    formats.write_result_json(payload, out)
    if args.svg:
        bar = smoothed if smoothed is not None else result.signal
        report.write_svg_bar(bar.labels, args.svg)
    if args.figure:
        report.save_diagnostics_figure(
            result, args.figure, title=os.path.basename(args.input)
        )
    print(f"{args.input}: {decision.label} (score={decision.score}, "
          f"mode={decision.mode}) -> {out}")
    return EXIT_OK


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise InvalidScenario(f"--param expects KEY=VALUE, got {pair!r}")
        key, _, value = pair.partition("=")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise InvalidScenario(f"--param {key}: {value!r} is not a number") from exc
    return params


def cmd_synth(args) -> int:
    if args.suite:
        manifest = synth.benchmark_suite(
            args.n_per_kind, args.seed, args.out,
            skeleton=args.skeleton, template=args.template,
            noise_sigma=args.noise_sigma,
        )
        print(f"wrote {len(manifest['entries'])} sequences to {args.out}")
        return EXIT_OK
    if not args.kind:
        raise InvalidScenario("either --suite or --kind is required")
    scenario_kwargs = {
        "kind": args.kind,
        "params": _parse_params(args.param),
        "seed": args.seed,
        "noise_sigma": args.noise_sigma,
    }
    if args.dt is not None:
        scenario_kwargs["dt"] = args.dt
    if args.g is not None:
        scenario_kwargs["g"] = args.g
    scn = synth.Scenario(**scenario_kwargs)
    entries = [(f"seq_000_{args.kind}", scn, synth.video_label(scn))]
    formats.write_corpus(entries, args.out, skeleton=args.skeleton,
                         template=args.template, seed=args.seed)
    print(f"wrote 1 sequence to {args.out}")
    return EXIT_OK


def _read_corpus_sequences(entries, cfg: RunConfig):
    """Read every corpus entry; collect unreadable offenders."""
    table = None
    sequences = []
    offenders = []
    for entry in entries:
        try:
            truth = formats.read_truth_json(entry.truth_path)
            if entry.data_path.endswith(".skeleton.json"):
                if table is None:
                    table = _weight_table(cfg)
                seq = formats.read_skeleton_json(entry.data_path)
                sequences.append((entry, seq, truth))
            else:
                sequences.append(
                    (entry, formats.read_trajectory_csv(entry.data_path), truth)
                )
        except MotionIntentError as exc:
            offenders.append((entry.data_path, str(exc)))
    return sequences, table, offenders


def _com_trajectories(sequences, table, occlude_flag: str, seed: int):
    """Skeleton entries -> COM trajectories, honoring the occlusion mode."""
    from .kinematics import Trajectory

    out = []
    skeleton_items = [
        (i, seq) for i, (entry, seq, truth) in enumerate(sequences)
        if not isinstance(seq, Trajectory)
    ]
    occluded = {}
    if skeleton_items and occlude_flag != "none":
        mode = OCCLUSION_MODE_OF_FLAG[occlude_flag]
        occluded_list = occlude_batch([s for _, s in skeleton_items], mode, seed)
        occluded = {i: s for (i, _), s in zip(skeleton_items, occluded_list)}
    for i, (entry, seq, truth) in enumerate(sequences):
        if isinstance(seq, Trajectory):
            out.append(seq)
        else:
            out.append(center_of_mass(occluded.get(i, seq), table))
    return out


def _evaluate(sequences, table, cfg: RunConfig, occlude_flag: str):
    """Per-sequence decisions and batch metrics for one configuration."""
    trajectories = _com_trajectories(sequences, table, occlude_flag, cfg.seed)
    concept_cfg = cfg.concept_config()
    rows = []
    decisions = []
    truths = []
    for (entry, _, truth), traj in zip(sequences, trajectories):
        result = run_pipeline(
            traj, concept_cfg, g=cfg.g, median_window=cfg.median_window
        )
        decision = _decide(result.signal, cfg, traj.dt)
        decisions.append(decision)
        truths.append(truth["video_label"])
        row = {
            "name": entry.name,
            "truth": truth["video_label"],
            "predicted": decision.label,
            "score": decision.score,
            "mode": decision.mode,
            "n_frames": len(traj),
        }
        if truth["frame_labels"] is not None:
            signal = result.signal
            ref = truth["frame_labels"][signal.offset : signal.offset + len(signal)]
            if len(ref) == len(signal):
                matches = sum(
                    1 for a, b in zip(signal.labels, ref) if int(a) == int(b)
                )
                row["frame_accuracy"] = matches / len(signal)
        rows.append(row)
    metrics = score_batch(decisions, truths)
    return metrics, rows, decisions


def cmd_eval(args) -> int:
    cfg = _run_config(args)
    entries = formats.load_corpus(args.corpus)
    sequences, table, offenders = _read_corpus_sequences(entries, cfg)
    if offenders:
        for path, message in offenders:
            print(f"unreadable: {path}: {message}", file=sys.stderr)
        return EXIT_DEGENERATE
    has_skeletons = any(
        entry.data_path.endswith(".skeleton.json") for entry in entries
    )
    if (args.occlude_sweep or cfg.occlude != "none") and not has_skeletons:
        raise SchemaError("occlusion modes require a skeleton corpus")
    manifest_kinds = _kinds_from_manifest(args.corpus)

    payload = {"corpus": args.corpus, "n": len(sequences),
               "aggregation": {"mode": cfg.agg, "threshold": cfg.agg_threshold}}
    base_rows = None

    variants = list(VARIANTS) if args.variant_sweep else [cfg.variant]
    variant_results = {}
    for variant in variants:
        vcfg = cfg.with_overrides(variant=variant)
        metrics, rows, _ = _evaluate(sequences, table, vcfg, cfg.occlude)
        variant_results[variant] = metrics
        if variant == cfg.variant:
            base_rows = rows
    if args.variant_sweep:
        payload["variant_sweep"] = {
            v: variant_results[v].to_dict() for v in VARIANTS
        }
    payload["metrics"] = variant_results[cfg.variant].to_dict()
    payload["variant"] = cfg.variant

    occlusion_results = {}
    if args.occlude_sweep:
        reference = None
        for mode in OCCLUSION_SWEEP:
            metrics, _, decisions = _evaluate(sequences, table, cfg, mode)
            changed = None
            if reference is None:
                reference = decisions
                changed = 0.0
            else:
                changed = sum(
                    1 for a, b in zip(reference, decisions) if a.label != b.label
                ) / len(decisions)
            occlusion_results[mode] = {
                "accuracy": metrics.accuracy,
                "n": metrics.n,
                "decisions_changed": changed,
            }
        payload["occlusion_sweep"] = occlusion_results

    for row in base_rows or []:
        if row["name"] in manifest_kinds:
            row["kind"] = manifest_kinds[row["name"]]

    out = args.out or os.path.join(args.corpus, "metrics.json")
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

    if args.report_dir:
        _write_report(args.report_dir, payload, base_rows or [])

    print(f"accuracy={payload['metrics']['accuracy']:.3f} "
          f"(n={payload['n']}, variant={cfg.variant}) -> {out}")
    if args.variant_sweep:
        parts = [f"{v}={variant_results[v].accuracy:.3f}" for v in VARIANTS]
        print("variant sweep: " + "  ".join(parts))
    if occlusion_results:
        parts = [
            f"{m}={occlusion_results[m]['accuracy']:.3f}" for m in OCCLUSION_SWEEP
        ]
        print("occlusion sweep: " + "  ".join(parts))
    return EXIT_OK


def _kinds_from_manifest(corpus_dir) -> dict:
    path = os.path.join(corpus_dir, "manifest.json")
    if not os.path.exists(path):
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        return {e["name"]: e.get("kind", "") for e in manifest.get("entries", [])}
    except (json.JSONDecodeError, KeyError, TypeError):
        return {}


def _write_report(report_dir, payload, rows) -> None:
    os.makedirs(report_dir, exist_ok=True)
    report.write_sequence_report_csv(
        rows, os.path.join(report_dir, "report.csv")
    )
    if "variant_sweep" in payload:
        sweep = {
            v: {"accuracy": m["accuracy"], "n": m["n"]}
            for v, m in payload["variant_sweep"].items()
        }
        report.write_sweep_csv(
            sweep, os.path.join(report_dir, "variant_sweep.csv"), "variant"
        )
        report.save_accuracy_figure(
            {v: m["accuracy"] for v, m in sweep.items()},
            os.path.join(report_dir, "variant_sweep.png"),
            "accuracy by rule subset",
        )
    if "occlusion_sweep" in payload:
        sweep = payload["occlusion_sweep"]
        report.write_sweep_csv(
            sweep, os.path.join(report_dir, "occlusion_sweep.csv"), "occlusion"
        )
        report.save_accuracy_figure(
            {m: sweep[m]["accuracy"] for m in sweep},
            os.path.join(report_dir, "occlusion_sweep.png"),
            "accuracy by occlusion mode",
        )
    accuracy = payload["metrics"]["accuracy"]
    report.save_accuracy_figure(
        {payload["variant"]: accuracy},
        os.path.join(report_dir, "accuracy.png"),
        f"video-level accuracy (n={payload['n']})",
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"infer": cmd_infer, "synth": cmd_synth, "eval": cmd_eval}
    try:
        return handlers[args.command](args)
    except (SchemaError, InvalidScenario) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (SeriesTooShort, DegenerateFrame) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except MotionIntentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
