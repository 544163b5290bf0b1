"""Command line front end.

Subcommands:

    classical   three-axis drive trajectory -> CSV, optional figure
    jc          detuned cavity trajectory -> CSV, optional figure
    compare     block propagation vs the printed closed form -> deviation CSV
    sweep       speed metrics across one swept parameter -> CSV
    metrics     recompute event statistics from a previous run's CSV

Exit codes: 0 success, 1 invalid arguments or configuration, 2 numerical
failure, 3 I/O failure.
"""

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .classical import ClassicalFieldParams, LAWS, classical_trajectory
from .errors import ContractViolationError, NumericalFailureError
from .jaynes_cummings import (
    JCParams,
    evolve_qubit_jc,
    jc_trajectory,
    paper_bloch_jc,
)
from .metrics import (
    DEFAULT_THRESHOLD,
    SWEEP_PARAMS,
    detect_events,
    speed_metrics,
    sweep,
)
from .output import (
    read_run_metadata,
    write_compare_csv,
    write_events_csv,
    write_series_csv,
    write_sweep_csv,
)
from .series import TRACK_NAMES, TimeGrid
from .states import BlochVector, check_bloch


class UsageError(Exception):
    """Bad command line or run configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_angle(token: str) -> float:
    """Parse a real number, allowing a pi suffix: '0.5pi' -> pi/2."""
    token = token.strip().lower()
    if token.endswith("pi"):
        head = token[:-2].strip()
        if head in ("", "+"):
            coef = 1.0
        elif head == "-":
            coef = -1.0
        else:
            coef = float(head)
        return coef * math.pi
    return float(token)


def _parse_triple(text: str, label: str, angle: bool = False) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"{label} expects three comma-separated values, got {text!r}")
    try:
        values = [parse_angle(p) if angle else float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"could not parse {label}: {exc}")
    return tuple(values)


def _parse_tracks(text: str) -> tuple[str, ...]:
    names = tuple(p.strip() for p in text.split(",") if p.strip())
    if not names:
        raise UsageError("empty track selection")
    for name in names:
        if name not in TRACK_NAMES:
            raise UsageError(f"unknown track {name!r}, expected one of {TRACK_NAMES}")
    return names


def _parse_range(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--range expects start:stop:count, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"could not parse --range: {exc}")
    if count < 1:
        raise UsageError("--range count must be at least 1")
    return tuple(float(v) for v in np.linspace(start, stop, count))


@dataclass
class RunConfig:
    mode: str
    bloch: BlochVector = BlochVector(1.0, 0.0, 0.0)
    tmax: float = 0.0
    steps: int = 2000
    threshold: float | None = DEFAULT_THRESHOLD
    tracks: tuple[str, ...] | None = ("sp11",)
    out: str | None = None
    plot: str | None = None
    seed: int | None = None
    oracle: bool = False
    law: str = "mixture"
    classical_params: ClassicalFieldParams | None = None
    jc_params: JCParams | None = None
    nmax: int | None = None
    paper_mode: bool = False
    sweep_model: str | None = None
    param: str | None = None
    values: tuple[float, ...] = field(default_factory=tuple)
    range_spec: str | None = None
    jobs: int = 1
    input_path: str | None = None


def _add_common(sub, with_tmax=True):
    sub.add_argument("--bloch", default="1,0,0", metavar="SX,SY,SZ",
                     help="initial Bloch vector (default 1,0,0)")
    if with_tmax:
        sub.add_argument("--tmax", type=float, required=True,
                         help="end of the time window")
    sub.add_argument("--steps", type=int, default=2000,
                     help="number of grid steps (samples = steps + 1)")
    sub.add_argument("--threshold", type=float, default=None,
                     help=f"orthogonality threshold in (0, 0.5), default {DEFAULT_THRESHOLD}")
    sub.add_argument("--track", default=None, metavar="NAME[,NAME...]",
                     help="tracks to watch: sp11 sp12 sp21 sp22 fidelity (default sp11)")
    sub.add_argument("--out", default=None, help="CSV output path")
    sub.add_argument("--plot", default=None, metavar="PATH.svg",
                     help="render a figure of the run to this file")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed recorded in run metadata (for harness bookkeeping)")


def _add_jc_flags(sub):
    sub.add_argument("--eta", type=float, required=True, help="coupling strength")
    sub.add_argument("--detuning", type=float, required=True,
                     help="detuning ratio Delta/gamma")
    sub.add_argument("--gamma", type=float, default=1.0,
                     help="frequency scale gamma (default 1, so time is gamma*t)")
    sub.add_argument("--photons", type=int, default=0,
                     help="initial Fock level n (default 0)")
    sub.add_argument("--nmax", type=int, default=None,
                     help="Fock truncation of the oracle (default photons + 3)")


def build_parser() -> _Parser:
    parser = _Parser(prog="qspeed",
                     description="Qubit orthogonality-speed simulator")
    subs = parser.add_subparsers(dest="mode", required=True)

    p_cl = subs.add_parser("classical", help="three-axis classical drive run")
    p_cl.add_argument("--alpha", required=True, metavar="A1,A2,A3",
                      help="drive strengths; accepts a pi suffix, e.g. 0.5pi")
    p_cl.add_argument("--law", choices=LAWS, default="mixture",
                      help="mixture of rotations (default) or sequential product")
    p_cl.add_argument("--oracle", action="store_true",
                      help="evolve through the matrix-channel oracle instead of the closed form")
    _add_common(p_cl)

    p_jc = subs.add_parser("jc", help="detuned cavity run")
    _add_jc_flags(p_jc)
    p_jc.add_argument("--oracle", action="store_true",
                      help="evolve through the truncated-Fock oracle instead of the block path")
    p_jc.add_argument("--paper-mode", action="store_true",
                      help="emit the printed-closed-form comparison instead of a trajectory "
                           "(same output as the compare subcommand)")
    _add_common(p_jc)

    p_cmp = subs.add_parser("compare",
                            help="block propagation vs printed closed form")
    _add_jc_flags(p_cmp)
    _add_common(p_cmp)

    p_sw = subs.add_parser("sweep", help="sweep one parameter, collect speed metrics")
    p_sw.add_argument("--model", choices=("classical", "jc"), required=True)
    p_sw.add_argument("--param", required=True,
                      help="parameter to sweep (classical: alpha, alpha1..3; "
                           "jc: eta, detuning, gamma, photons)")
    p_sw.add_argument("--range", required=True, metavar="START:STOP:COUNT",
                      help="sweep grid, linearly spaced")
    p_sw.add_argument("--jobs", type=int, default=1,
                      help="parallel worker processes (default 1)")
    p_sw.add_argument("--alpha", default="0,0,0", metavar="A1,A2,A3",
                      help="base drive strengths for classical sweeps")
    p_sw.add_argument("--eta", type=float, default=0.1)
    p_sw.add_argument("--detuning", type=float, default=0.0)
    p_sw.add_argument("--gamma", type=float, default=1.0)
    p_sw.add_argument("--photons", type=int, default=0)
    _add_common(p_sw)

    p_me = subs.add_parser("metrics",
                           help="recompute event statistics from a run's CSV")
    p_me.add_argument("--in", dest="input_path", required=True, metavar="FILE",
                      help="CSV written by a classical or jc run")
    p_me.add_argument("--threshold", type=float, default=None,
                      help="override the threshold recorded in the file")
    p_me.add_argument("--track", default=None,
                      help="override the tracks recorded in the file")
    p_me.add_argument("--out", default=None,
                      help="write the refined event list to this CSV")

    return parser


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(mode=ns.mode)

    if ns.mode == "metrics":
        cfg.input_path = ns.input_path
        cfg.threshold = ns.threshold
        cfg.tracks = _parse_tracks(ns.track) if ns.track else None
        cfg.out = ns.out
        return cfg

    cfg.bloch = BlochVector(*_parse_triple(ns.bloch, "--bloch"))
    try:
        check_bloch(cfg.bloch)
    except ContractViolationError as exc:
        raise UsageError(str(exc))
    if not ns.tmax > 0.0:
        raise UsageError("--tmax must be positive")
    if ns.steps < 1:
        raise UsageError("--steps must be at least 1")
    cfg.tmax = ns.tmax
    cfg.steps = ns.steps
    cfg.threshold = ns.threshold if ns.threshold is not None else DEFAULT_THRESHOLD
    if not 0.0 < cfg.threshold < 0.5:
        raise UsageError(f"--threshold must lie in (0, 0.5), got {cfg.threshold}")
    cfg.tracks = _parse_tracks(ns.track) if ns.track else ("sp11",)
    cfg.out = ns.out
    cfg.plot = ns.plot
    cfg.seed = ns.seed
    cfg.oracle = getattr(ns, "oracle", False)

    def _jc_params() -> JCParams:
        if ns.eta < 0.0:
            raise UsageError("--eta must be nonnegative")
        if ns.gamma <= 0.0:
            raise UsageError("--gamma must be positive")
        if ns.photons < 0:
            raise UsageError("--photons must be nonnegative")
        return JCParams(eta=ns.eta, delta_over_gamma=ns.detuning,
                        gamma=ns.gamma, photons=ns.photons)

    if ns.mode == "classical":
        cfg.classical_params = ClassicalFieldParams(
            *_parse_triple(ns.alpha, "--alpha", angle=True))
        cfg.law = ns.law
    elif ns.mode in ("jc", "compare"):
        cfg.jc_params = _jc_params()
        cfg.nmax = getattr(ns, "nmax", None)
        if cfg.nmax is not None and cfg.nmax < cfg.jc_params.photons + 2:
            raise UsageError("--nmax must be at least photons + 2")
        cfg.paper_mode = bool(getattr(ns, "paper_mode", False)) or ns.mode == "compare"
    elif ns.mode == "sweep":
        cfg.sweep_model = ns.model
        cfg.param = ns.param
        if ns.param not in SWEEP_PARAMS[ns.model]:
            raise UsageError(
                f"--param {ns.param!r} is not sweepable for model {ns.model!r}; "
                f"choose from {sorted(SWEEP_PARAMS[ns.model])}")
        cfg.values = _parse_range(ns.range)
        cfg.range_spec = ns.range
        if ns.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        cfg.jobs = ns.jobs
        if ns.model == "classical":
            cfg.classical_params = ClassicalFieldParams(
                *_parse_triple(ns.alpha, "--alpha", angle=True))
        else:
            cfg.jc_params = _jc_params()
    return cfg


def _fmt_opt(value: float | None) -> str:
    return "none" if value is None else f"{value:.6e}"


def _common_meta(cfg: RunConfig) -> dict:
    return {
        "bloch0": ",".join(repr(c) for c in (cfg.bloch.sx, cfg.bloch.sy, cfg.bloch.sz)),
        "tmax": cfg.tmax,
        "steps": cfg.steps,
        "threshold": cfg.threshold,
        "tracks": ",".join(cfg.tracks),
        "seed": cfg.seed,
    }


def _run_trajectory(cfg: RunConfig) -> int:
    grid = TimeGrid.uniform(cfg.tmax, cfg.steps + 1)
    if cfg.mode == "classical":
        series = classical_trajectory(cfg.bloch, cfg.classical_params, grid,
                                      law=cfg.law, use_oracle=cfg.oracle)
    else:
        series = jc_trajectory(cfg.bloch, cfg.jc_params, grid,
                               use_oracle=cfg.oracle, n_max=cfg.nmax)
    events = detect_events(series, threshold=cfg.threshold, tracks=cfg.tracks)
    stats = speed_metrics(events, grid.t_end)
    if cfg.out:
        write_series_csv(cfg.out, series, _common_meta(cfg))
    if cfg.plot:
        from .plotting import render_series_figure
        render_series_figure(series, cfg.tracks, events, cfg.plot)
    print(f"mode={cfg.mode} events={stats.event_count} "
          f"first_orthogonality_time={_fmt_opt(stats.first_orthogonality_time)} "
          f"events_per_unit_time={stats.events_per_unit_time:.6e}")
    return 0


def _run_compare(cfg: RunConfig) -> int:
    grid = TimeGrid.uniform(cfg.tmax, cfg.steps + 1)
    n = grid.samples
    block = np.empty((n, 3))
    printed = np.empty((n, 3))
    residual = np.empty(n)
    for k, t in enumerate(grid.values):
        b = evolve_qubit_jc(cfg.bloch, cfg.jc_params, float(t))
        pr, res = paper_bloch_jc(cfg.bloch, cfg.jc_params, float(t))
        block[k] = (b.sx, b.sy, b.sz)
        printed[k] = (pr.sx, pr.sy, pr.sz)
        residual[k] = res
    deviation = float(np.max(np.abs(block - printed)))
    max_residual = float(np.max(residual))
    p = cfg.jc_params
    meta = {
        "mode": "compare",
        "eta": p.eta,
        "detuning": p.delta_over_gamma,
        "gamma": p.gamma,
        "photons": p.photons,
        "time_axis": "gamma_t",
    }
    meta.update(_common_meta(cfg))
    if cfg.out:
        write_compare_csv(cfg.out, grid.values, block, printed, residual, meta)
    if cfg.plot:
        from .plotting import render_compare_figure
        render_compare_figure(grid.values, block, printed, residual, cfg.plot)
    print(f"mode=compare max_deviation={deviation:.6e} "
          f"max_imag_residual={max_residual:.6e} samples={n}")
    return 0


def _run_sweep(cfg: RunConfig) -> int:
    grid = TimeGrid.uniform(cfg.tmax, cfg.steps + 1)
    base = cfg.classical_params if cfg.sweep_model == "classical" else cfg.jc_params
    result = sweep(cfg.sweep_model, base, cfg.bloch, grid, cfg.param, cfg.values,
                   threshold=cfg.threshold, tracks=cfg.tracks, jobs=cfg.jobs)
    meta = {"mode": "sweep", "model": cfg.sweep_model, "range": cfg.range_spec}
    if cfg.sweep_model == "classical":
        p = cfg.classical_params
        meta.update({"alpha1": p.alpha1, "alpha2": p.alpha2, "alpha3": p.alpha3})
    else:
        p = cfg.jc_params
        meta.update({"eta": p.eta, "detuning": p.delta_over_gamma,
                     "gamma": p.gamma, "photons": p.photons})
    meta.update(_common_meta(cfg))
    if cfg.out:
        write_sweep_csv(cfg.out, result, meta)
    if cfg.plot:
        from .plotting import render_sweep_figure
        render_sweep_figure(result, cfg.plot)
    best = result.metrics[result.argmax_index]
    print(f"mode=sweep param={result.param} points={len(result.values)} "
          f"critical_value={result.critical_value:.6e} "
          f"max_events_per_unit_time={best.events_per_unit_time:.6e}")
    return 0


def _require_meta(meta: dict, key: str, path: str) -> str:
    if key not in meta:
        raise UsageError(f"{path} lacks required run metadata key {key!r}")
    return meta[key]


def _run_metrics(cfg: RunConfig) -> int:
    meta = read_run_metadata(cfg.input_path)
    # trajectory files carry a model key and no mode key; sweep, compare and
    # event reports all stamp a mode and cannot be re-refined
    if "mode" in meta:
        raise UsageError(
            f"{cfg.input_path} is a {meta['mode']} report, "
            "metrics needs a trajectory file")
    model = _require_meta(meta, "model", cfg.input_path)
    if model not in ("classical", "jc"):
        raise UsageError(f"metrics needs a classical or jc trajectory file, got model={model!r}")
    bloch = BlochVector(*(float(v) for v in
                          _require_meta(meta, "bloch0", cfg.input_path).split(",")))
    tmax = float(_require_meta(meta, "tmax", cfg.input_path))
    steps = int(_require_meta(meta, "steps", cfg.input_path))
    grid = TimeGrid.uniform(tmax, steps + 1)
    use_oracle = meta.get("oracle", "0") == "1"
    if model == "classical":
        params = ClassicalFieldParams(float(meta["alpha1"]), float(meta["alpha2"]),
                                      float(meta["alpha3"]))
        series = classical_trajectory(bloch, params, grid,
                                      law=meta.get("law", "mixture"),
                                      use_oracle=use_oracle)
    else:
        params = JCParams(eta=float(meta["eta"]),
                          delta_over_gamma=float(meta["detuning"]),
                          gamma=float(meta.get("gamma", "1.0")),
                          photons=int(meta.get("photons", "0")))
        nmax = None if meta.get("nmax", "none") == "none" else int(meta["nmax"])
        series = jc_trajectory(bloch, params, grid, use_oracle=use_oracle,
                               n_max=nmax)
    threshold = cfg.threshold if cfg.threshold is not None \
        else float(meta.get("threshold", str(DEFAULT_THRESHOLD)))
    tracks = cfg.tracks if cfg.tracks is not None \
        else tuple(meta.get("tracks", "sp11").split(","))
    events = detect_events(series, threshold=threshold, tracks=tracks)
    stats = speed_metrics(events, grid.t_end)
    if cfg.out:
        write_events_csv(cfg.out, events, {
            "mode": "events", "source_model": model, "threshold": threshold,
            "tracks": ",".join(tracks), "tmax": tmax, "steps": steps,
        })
    print(f"mode=metrics model={model} events={stats.event_count} "
          f"first_orthogonality_time={_fmt_opt(stats.first_orthogonality_time)} "
          f"events_per_unit_time={stats.events_per_unit_time:.6e}")
    return 0


def run(cfg: RunConfig) -> int:
    if cfg.mode == "metrics":
        return _run_metrics(cfg)
    if cfg.mode == "sweep":
        return _run_sweep(cfg)
    if cfg.mode == "compare" or (cfg.mode == "jc" and cfg.paper_mode):
        return _run_compare(cfg)
    return _run_trajectory(cfg)


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as err:
        print(f"qspeed: error: {err}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except UsageError as err:
        print(f"qspeed: error: {err}", file=sys.stderr)
        return 1
    except ContractViolationError as err:
        print(f"qspeed: error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"qspeed: error: {err}", file=sys.stderr)
        return 1
    except NumericalFailureError as err:
        print(f"qspeed: numerical failure: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"qspeed: i/o failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
