"""Monte-Carlo experiments: random scenes, hit-or-miss scoring and sweeps."""

from __future__ import annotations

import csv
import hashlib
import json
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .cdma import cdma_process
from .channelizer import channelize
from .config import RadarConfig, SynthesisMode, Target, TargetScene, config_hash
from .dictionaries import build_dictionaries
from .errors import SceneTooDense
from .recovery import RecoveryResult, doppler_focus, omp_first_iteration, omp_focused
from .synthesis import add_noise, synthesize
from .waveforms import CarrierMode, WaveformBank, assign_carriers, cdma_code_search, fdma_bank, random_array, ula_array

METHODS = ("fdma", "fdma-nonit", "cdma")
SWEEPS = ("none", "bandwidth", "snr", "rcs_ratio", "aperture")


# -- scenes -----------------------------------------------------------------


def rcs_magnitude_ratio(rcs_ratio_db: float) -> float:
    """``alpha_max / alpha_min`` for an RCS ratio ``10 log10(alpha_max / alpha_min)``."""
    return 10 ** (rcs_ratio_db / 10)


def random_scene(
    config: RadarConfig,
    num_targets: int,
    rcs_ratio_db: float | None = None,
    seed: int | None = None,
    min_separation: int = 0,
) -> TargetScene:
    """Distinct on-grid targets drawn uniformly; unit magnitudes with random phases.

    With ``rcs_ratio_db`` the scene has exactly two targets whose magnitudes
    differ by :func:`rcs_magnitude_ratio`. ``min_separation`` is the minimum
    Chebyshev distance in grid bins between any two targets.
    """
    G, TR, P = config.total_bins, config.num_channels, config.num_pulses
    cells = G * TR * P
    if rcs_ratio_db is not None and num_targets != 2:
        raise ValueError("the RCS-ratio scene has exactly two targets")
    if num_targets > cells:
        raise SceneTooDense(f"{num_targets} targets on {cells} cells")
    rng = np.random.default_rng(seed)
    if num_targets == 0:
        return TargetScene((), seed)

    chosen: list[tuple[int, int, int]] = []
    if min_separation <= 0:
        flat = rng.choice(cells, size=num_targets, replace=False)
        chosen = [(int(f % G), int(f // G % TR), int(f // (G * TR))) for f in flat]
    else:
        for _ in range(1000 * num_targets):
            cand = (int(rng.integers(G)), int(rng.integers(TR)), int(rng.integers(P)))
            if all(max(abs(a - b) for a, b in zip(cand, c)) >= min_separation for c in chosen):
                chosen.append(cand)
                if len(chosen) == num_targets:
                    break
        if len(chosen) < num_targets:
            raise SceneTooDense(f"could not place {num_targets} targets {min_separation} bins apart")

    mags = np.ones(num_targets)
    if rcs_ratio_db is not None:
        mags[1] = 1.0 / rcs_magnitude_ratio(rcs_ratio_db)
    phases = np.exp(2j * np.pi * rng.random(num_targets))
    return TargetScene(tuple(Target(complex(a), *c) for a, c in zip(mags * phases, chosen)), seed)


# -- scoring ----------------------------------------------------------------


@dataclass(frozen=True)
class PointScore:
    value: float | None
    method: str
    hits: int
    total: int

    @property
    def hit_rate(self) -> float:
        return self.hits / self.total if self.total else 1.0

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "hits": self.hits,
                "total": self.total, "hit_rate": self.hit_rate}


@dataclass(frozen=True)
class HitReport:
    points: tuple[PointScore, ...]
    details: tuple[dict, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def hits(self) -> int:
        return sum(p.hits for p in self.points)

    @property
    def total(self) -> int:
        return sum(p.total for p in self.points)

    @property
    def hit_rate(self) -> float:
        return self.hits / self.total if self.total else 1.0

    def rates(self, method: str) -> list[float]:
        return [p.hit_rate for p in self.points if p.method == method]

    def to_dict(self) -> dict:
        return {"meta": self.meta, "points": [p.to_dict() for p in self.points], "trials": list(self.details)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def match_targets(truth: TargetScene, result: RecoveryResult, config: RadarConfig) -> list[tuple[int, int]]:
    """Greedy one-to-one matching of estimates to truth within +-1 bin per axis.

    Estimates are visited in recovery order; each takes the closest (Chebyshev
    distance, then lowest index) unmatched truth target. Doppler is only
    compared when ``P > 1``.
    """
    cells = truth.cells
    use_doppler = config.num_pulses > 1
    free = set(range(len(cells)))
    pairs = []
    for e, (s, r, u) in enumerate(result.support):
        best = None
        for i in sorted(free):
            ds_, dr = abs(s - cells[i, 0]), abs(r - cells[i, 1])
            du = abs(u - cells[i, 2]) if use_doppler else 0
            d = max(ds_, dr, du)
            if d <= 1 and (best is None or d < best[0]):
                best = (d, i)
        if best is not None:
            free.discard(best[1])
            pairs.append((e, best[1]))
    return pairs


def score_hits(truth: TargetScene, result: RecoveryResult, config: RadarConfig, value=None) -> HitReport:
    hits = len(match_targets(truth, result, config))
    return HitReport((PointScore(value, result.method, hits, len(truth)),))


# -- experiments --------------------------------------------------------------


@dataclass(frozen=True)
class ConfigTemplate:
    """Per-trial configuration recipe; the PRI follows from ``num_bins / B_h``."""

    num_tx: int = 8
    num_rx: int = 8
    num_bins: int = 16
    num_pulses: int = 1
    channel_bandwidth: float = 5e6
    carrier_freq: float = 10e9
    aperture: float | None = None  # default T R / 2
    array: str = "random"  # random | ula
    carriers: str = "permutation"  # permutation | linear
    pulse_width: float | None = None

    def build(self, array_seed, carrier_seed, mode=SynthesisMode.EXACT, **overrides) -> RadarConfig:
        t = replace(self, **overrides) if overrides else self
        T, R = t.num_tx, t.num_rx
        Z = t.aperture if t.aperture is not None else T * R / 2
        if t.array == "random":
            tx, rx = random_array(T, R, Z, array_seed)
        else:
            tx, rx = ula_array(T, R)
        f = assign_carriers(T, t.channel_bandwidth, CarrierMode(t.carriers), carrier_seed)
        return RadarConfig(
            num_tx=T, num_rx=R, num_pulses=t.num_pulses, pri=t.num_bins / t.channel_bandwidth,
            channel_bandwidth=t.channel_bandwidth, carrier_freq=t.carrier_freq,
            tx_positions=tuple(tx), rx_positions=tuple(rx), tx_carriers=tuple(f),
            aperture=max(Z, float(np.max(tx)), float(np.max(rx))), synthesis_mode=mode,
            pulse_width=t.pulse_width,
        )


@dataclass(frozen=True)
class ExperimentSpec:
    template: ConfigTemplate = ConfigTemplate()
    sweep: str = "none"
    values: tuple = ()
    trials: int = 200
    num_targets: int = 5
    rcs_ratio_db: float | None = None  # set (or swept) for the two-target dynamic-range scene
    min_separation: int = 0
    methods: tuple = ("fdma",)
    snr_db: float | None = None  # None: noiseless
    mode: str = "exact"
    master_seed: int = 0
    noise_bandwidth: str = "channel"
    cdma_code_length: int | None = None  # default: T N chips, i.e. the whole PRI
    cdma_code_trials: int = 200
    cdma_alphabet: int | None = 4
    radius: int = 1
    keep_trials: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sweep not in SWEEPS:
            raise ValueError(f"sweep must be one of {SWEEPS}")
        if any(m not in METHODS for m in self.methods):
            raise ValueError(f"methods must be drawn from {METHODS}")
        if not all(np.isfinite(self.values)) or list(self.values) != sorted(self.values):
            raise ValueError("sweep values must be finite and sorted")

    def points(self) -> tuple:
        return self.values if self.sweep != "none" else (None,)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        d["template"] = ConfigTemplate(**d.get("template", {}))
        for key in ("values", "methods"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)

    def spec_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


def load_spec(path) -> ExperimentSpec:
    return ExperimentSpec.from_dict(json.loads(Path(path).read_text()))


def trial_seeds(master_seed: int, point_index: int, trial_index: int) -> list[int]:
    """Independent (array, carriers, scene, noise) seeds for one trial."""
    state = np.random.SeedSequence([master_seed, point_index, trial_index]).generate_state(4, dtype=np.uint64)
    return [int(s) for s in state]


def _point_overrides(spec: ExperimentSpec, value):
    over, snr, rcs = {}, spec.snr_db, spec.rcs_ratio_db
    if spec.sweep == "bandwidth":
        over["channel_bandwidth"] = value
    elif spec.sweep == "aperture":
        over["aperture"] = value
    elif spec.sweep == "snr":
        snr = value
    elif spec.sweep == "rcs_ratio":
        rcs = value
    return over, snr, rcs


def _run_trial(task) -> dict:
    spec, banks, pi, value, ti = task
    over, snr, rcs = _point_overrides(spec, value)
    s_arr, s_car, s_scene, s_noise = trial_seeds(spec.master_seed, pi, ti)
    mode = SynthesisMode(spec.mode)
    cfg = spec.template.build(s_arr, s_car, mode, **over)
    scene = random_scene(cfg, 2 if rcs is not None else spec.num_targets, rcs, s_scene, spec.min_separation)
    L = len(scene)
    out = {"point": pi, "trial": ti, "config_hash": config_hash(cfg), "seeds": [s_arr, s_car, s_scene, s_noise],
           "hits": {}}
    results = {}

    if {"fdma", "fdma-nonit"} & set(spec.methods):
        bank = fdma_bank(cfg)
        rx = synthesize(cfg, scene, bank, mode)
        if snr is not None:
            rx = add_noise(rx, cfg, snr, s_noise, spec.noise_bandwidth)
        phi = doppler_focus(channelize(rx, bank, cfg))
        ds = build_dictionaries(cfg)
        if "fdma" in spec.methods:
            results["fdma"] = omp_focused(phi, ds, L)
        if "fdma-nonit" in spec.methods:
            results["fdma-nonit"] = omp_first_iteration(phi, ds, L, spec.radius)
    if "cdma" in spec.methods:
        bank = banks["cdma"]
        rx = synthesize(cfg, scene, bank, mode)
        if snr is not None:
            rx = add_noise(rx, cfg, snr, s_noise, spec.noise_bandwidth)
        results["cdma"] = cdma_process(rx, bank, cfg, L, spec.radius)

    G = cfg.total_bins
    for method in spec.methods:
        res = results[method]
        pairs = match_targets(scene, res, cfg)
        out["hits"][method] = len(pairs)
        if spec.keep_trials:
            out.setdefault("errors", {})[method] = [
                {
                    "delay_bins": int(res.support[e][0] - scene.cells[i, 0]),
                    "delay_s": float((res.support[e][0] - scene.cells[i, 0]) * cfg.pri / G),
                    "azimuth_bins": int(res.support[e][1] - scene.cells[i, 1]),
                    "doppler_bins": int(res.support[e][2] - scene.cells[i, 2]),
                }
                for e, i in pairs
            ]
    out["num_targets"] = L
    return out


def _cdma_bank(spec: ExperimentSpec) -> WaveformBank:
    t = spec.template
    n_chips = spec.cdma_code_length or t.num_tx * t.num_bins
    seed = int(np.random.SeedSequence([spec.master_seed, 0xC0DE]).generate_state(1)[0])
    return cdma_code_search(t.num_tx, n_chips, spec.cdma_code_trials, seed, spec.cdma_alphabet)


def run_experiment(spec: ExperimentSpec, out_dir=None, threads: int = 1) -> HitReport:
    """Run every (sweep point, trial) and aggregate hit rates per method.

    Results are reduced in (point, trial) order whatever the worker count, so
    the report is byte-identical for a fixed spec. With ``out_dir`` the
    report, a per-point CSV and an environment record are written there.
    """
    start = time.perf_counter()
    banks = {"cdma": _cdma_bank(spec)} if "cdma" in spec.methods else {}
    tasks = [(spec, banks, pi, v, ti) for pi, v in enumerate(spec.points()) for ti in range(spec.trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(_run_trial, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    else:
        trials = [_run_trial(t) for t in tasks]

    points = []
    for pi, v in enumerate(spec.points()):
        rows = [t for t in trials if t["point"] == pi]
        total = sum(t["num_targets"] for t in rows)
        for method in spec.methods:
            points.append(PointScore(v, method, sum(t["hits"][method] for t in rows), total))
    meta = {"master_seed": spec.master_seed, "spec_hash": spec.spec_hash(), "spec": spec.to_dict()}
    if "cdma" in banks:
        meta["cdma_max_xcorr"] = banks["cdma"].max_xcorr
    report = HitReport(tuple(points), tuple(trials) if spec.keep_trials else (), meta)

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
        with open(out / "hit_rates.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sweep", "value", "method", "hits", "total", "hit_rate"])
            for p in points:
                w.writerow([spec.sweep, p.value, p.method, p.hits, p.total, f"{p.hit_rate:.6f}"])
        env = {
            "master_seed": spec.master_seed,
            "spec_hash": spec.spec_hash(),
            "trial_config_hashes": [t["config_hash"] for t in trials],
            "wall_time_s": time.perf_counter() - start,
            "threads": threads,
            "python": platform.python_version(),
            "numpy": np.__version__,
        }
        (out / "environment.json").write_text(json.dumps(env, indent=1))
    return report
