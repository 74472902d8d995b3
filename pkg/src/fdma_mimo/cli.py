"""Command-line entry point: ``fdma-mimo <simulate|experiment|ambiguity|codesearch|validate>``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import presets
from .cdma import cdma_process
from .channelizer import channelize
from .config import RadarConfig, SynthesisMode, Target, config_hash, load_config, save_config, validate_config
from .coupling import Layout, ambiguity_map, psl_distribution
from .dictionaries import build_dictionaries
from .harness import ConfigTemplate, ExperimentSpec, load_spec, match_targets, random_scene, run_experiment
from .recovery import doppler_focus, omp_first_iteration, omp_focused
from .synthesis import add_noise, synthesize
from .tensorio import write_tensor
from .waveforms import cdma_code_search, export_codes_csv, fdma_bank

PRESETS = {"fig2": presets.fig2_spec, "fig7": presets.fig7_spec, "fig9": presets.fig9_spec, "fig10": presets.fig10_spec}


def _config(args) -> RadarConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        seeds = np.random.SeedSequence(args.seed).generate_state(2)
        cfg = presets.DESK_TEMPLATE.build(int(seeds[0]), int(seeds[1]))
    if args.mode:
        cfg = cfg.with_mode(SynthesisMode(args.mode))
    return cfg


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump(obj, path: Path | None):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if path is None:
        print(text)
    else:
        path.write_text(text)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    out = _out(args)
    h = config_hash(cfg)
    scene = random_scene(cfg, args.targets, None, args.seed)
    mode = cfg.synthesis_mode
    if args.method == "cdma":
        bank = cdma_code_search(cfg.num_tx, cfg.total_bins, args.code_trials, args.seed)
    else:
        bank = fdma_bank(cfg)
    rx = synthesize(cfg, scene, bank, mode)
    if args.snr is not None:
        rx = add_noise(rx, cfg, args.snr, args.seed)
    write_tensor(out / "spectra.fdmt", rx.coefficients, h, args.seed)
    if args.method == "cdma":
        result = cdma_process(rx, bank, cfg, len(scene))
    else:
        y = channelize(rx, bank, cfg)
        write_tensor(out / "channels.fdmt", y.y, h, args.seed)
        phi = doppler_focus(y)
        ds = build_dictionaries(cfg)
        result = omp_focused(phi, ds, len(scene)) if args.method == "fdma" else omp_first_iteration(phi, ds, len(scene))
    save_config(cfg, out / "config.json", args.seed)
    report = {
        "config_hash": h,
        "seed": args.seed,
        "mode": mode.value,
        "snr_db": args.snr,
        "scene": scene.to_dict(),
        "result": result.to_dict(),
        "hits": len(match_targets(scene, result, cfg)),
    }
    _dump(report, out / "result.json")
    print(f"{args.method}: {report['hits']}/{len(scene)} hits, written to {out}")
    return 0


def cmd_experiment(args) -> int:
    if args.spec:
        spec = load_spec(args.spec)
    elif args.preset:
        spec = PRESETS[args.preset]()
    else:
        spec = ExperimentSpec(ConfigTemplate(), trials=args.trials or 1)
    over = {}
    if args.seed is not None:
        over["master_seed"] = args.seed
    if args.mode:
        over["mode"] = args.mode
    if args.trials:
        over["trials"] = args.trials
    if args.method:
        over["methods"] = (args.method,)
    spec = replace(spec, **over) if over else spec
    report = run_experiment(spec, args.out, args.threads)
    for p in report.points:
        print(f"{spec.sweep}={p.value} {p.method}: {p.hits}/{p.total} = {p.hit_rate:.3f}")
    return 0


def cmd_ambiguity(args) -> int:
    cfg = _config(args)
    out = _out(args)
    h = config_hash(cfg)
    target = Target(1.0, cfg.total_bins // 2, cfg.num_channels // 2, cfg.num_pulses // 2)
    summary = {"config_hash": h, "seed": args.seed, "target": list(target.cell), "layouts": {}}
    seeds = [args.seed + i for i in range(args.draws)]
    for label in Layout:
        rep = ambiguity_map(cfg, target, label, args.seed)
        np.savetxt(out / f"map_{label.value}.csv", rep.map, delimiter=",", fmt="%.8e",
                   header=f"config_hash={h} seed={args.seed} rows=azimuth cols=delay")
        psl = psl_distribution(cfg, label, seeds, target) if args.draws > 0 else np.array([])
        summary["layouts"][label.value] = {**rep.to_dict(), "psl_draws": psl.tolist(),
                                           "psl_median": float(np.median(psl)) if psl.size else None}
    _dump(summary, out / "ambiguity.json")
    with open(out / "psl.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["config_hash", "seed", "layout", "psl_single", "psl_median"])
        for k, v in summary["layouts"].items():
            w.writerow([h, args.seed, k, v["peak_sidelobe_level"], v["psl_median"]])
    for k, v in summary["layouts"].items():
        print(f"{k}: PSL {v['peak_sidelobe_level']:.3f} median {v['psl_median']}")
    return 0


def cmd_codesearch(args) -> int:
    out = _out(args)
    bank = cdma_code_search(args.num_tx, args.code_length, args.code_trials, args.seed,
                            None if args.alphabet == 0 else args.alphabet)
    export_codes_csv(bank, out / "codes.csv")
    _dump({"seed": args.seed, "num_tx": args.num_tx, "code_length": args.code_length,
           "trials": args.code_trials, "max_xcorr": bank.max_xcorr, "bank": bank.to_dict()}, out / "codes.json")
    print(f"max cross-correlation {bank.max_xcorr:.4f}")
    return 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    rep = validate_config(cfg, args.max_velocity, args.max_range, args.max_acceleration, args.threshold)
    doc = {"config_hash": config_hash(cfg), "seed": args.seed, **rep.to_dict()}
    _dump(doc, _out(args) / "assumptions.json" if args.out else None)
    return 0 if all(rep.all_holds.values()) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="RadarConfig JSON; default: seeded desk configuration")
    common.add_argument("--spec", help="ExperimentSpec JSON")
    common.add_argument("--seed", type=int, default=None, help="seed (U64)")
    common.add_argument("--mode", choices=[m.value for m in SynthesisMode])
    common.add_argument("--method", choices=["fdma", "fdma-nonit", "cdma"])
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="fdma-mimo", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="one scene -> recovery result")
    s.add_argument("--targets", type=int, default=5)
    s.add_argument("--snr", type=float, default=None, help="per-sample SNR in dB; omit for noiseless")
    s.add_argument("--code-trials", type=int, default=200)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("experiment", parents=[common], help="spec or preset -> hit-rate reports")
    e.add_argument("--preset", choices=sorted(PRESETS))
    e.add_argument("--trials", type=int, default=None)
    e.set_defaults(func=cmd_experiment)

    a = sub.add_parser("ambiguity", parents=[common], help="single-target maps and PSL per layout")
    a.add_argument("--draws", type=int, default=100, help="layout draws for the PSL distribution")
    a.set_defaults(func=cmd_ambiguity)

    c = sub.add_parser("codesearch", parents=[common], help="random search for a CDMA code bank")
    c.add_argument("--num-tx", type=int, default=8)
    c.add_argument("--code-length", type=int, default=128)
    c.add_argument("--code-trials", type=int, default=1000)
    c.add_argument("--alphabet", type=int, default=4, help="phase alphabet size, 0 for continuous phases")
    c.set_defaults(func=cmd_codesearch)

    v = sub.add_parser("validate", parents=[common], help="narrowband and timing assumption margins")
    v.add_argument("--max-velocity", type=float, default=30.0)
    v.add_argument("--max-range", type=float, default=1e4)
    v.add_argument("--max-acceleration", type=float, default=0.0)
    v.add_argument("--threshold", type=float, default=0.1)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "experiment":
        args.seed = 0 if args.seed is None else args.seed
        if args.out is None and args.command != "validate":
            args.out = f"out_{args.command}"
        if args.method is None:
            args.method = "fdma"
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
