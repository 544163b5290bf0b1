"""Orthogonality events and speed-of-evolution statistics.

An orthogonality event is a local minimum of a chosen overlap track whose
refined depth falls below a threshold. Grid samples only bracket the
minima; each bracket is then refined by golden-section search that
re-evaluates the continuous model, so event times do not inherit the grid
resolution.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .classical import ClassicalFieldParams, classical_trajectory
from .jaynes_cummings import JCParams, jc_trajectory
from .series import OverlapSeries, TimeGrid, TRACK_INDEX, TRACK_NAMES
from .states import BlochVector, bloch_to_density, eigenbasis, uhlmann_fidelity

# Fraction of t_end used as the absolute time tolerance of bracket refinement.
REFINE_TOL_FACTOR = 1e-10

DEFAULT_THRESHOLD = 1e-3

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OrthogonalityEvent:
    t_event: float
    min_value: float
    channel: str


@dataclass(frozen=True)
class SpeedMetrics:
    first_orthogonality_time: float | None
    event_count: int
    events_per_unit_time: float
    window_end: float


@dataclass(frozen=True)
class SweepResult:
    """Per-value speed metrics of a one-parameter sweep.

    ``argmax_index`` points at the largest events_per_unit_time (ties go to
    the lowest index); the matching parameter value estimates where the
    evolution runs fastest. ``argmin_index`` is the analogous minimum.
    """

    param: str
    values: tuple[float, ...]
    metrics: tuple[SpeedMetrics, ...]
    argmax_index: int
    argmin_index: int

    @property
    def critical_value(self) -> float:
        return self.values[self.argmax_index]

    @property
    def rates(self) -> np.ndarray:
        return np.array([m.events_per_unit_time for m in self.metrics])


def golden_section_minimize(f, a: float, b: float, xtol: float):
    """Minimize a unimodal scalar function on [a, b] to x-tolerance xtol.

    Returns the best evaluated point (t, f(t)). Works on kinked minima
    such as |overlap| touching zero, where derivative-based refinement
    would stumble.
    """
    if not b > a:
        raise ValueError("bracket must satisfy a < b")
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    if fc <= fd:
        best_t, best_v = c, fc
    else:
        best_t, best_v = d, fd
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            t_new, v_new = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            t_new, v_new = d, fd
        if v_new < best_v:
            best_t, best_v = t_new, v_new
    return best_t, best_v


def _track_evaluator(series: OverlapSeries, name: str):
    """Continuous-time scalar track t -> value, re-running the model."""
    evolve = series.evaluate
    if name == "fidelity":
        rho0 = bloch_to_density(BlochVector.from_array(series.bloch[0]))

        def f(t: float) -> float:
            return uhlmann_fidelity(rho0, bloch_to_density(evolve(t)))
    else:
        i, j = TRACK_INDEX[name]
        v_init = series.initial_basis.vectors[:, i]

        def f(t: float) -> float:
            basis_t = eigenbasis(bloch_to_density(evolve(t)))
            return float(abs(np.vdot(v_init, basis_t.vectors[:, j])))

    return f


def detect_events(series: OverlapSeries, threshold: float = DEFAULT_THRESHOLD,
                  tracks=("sp11",)) -> list[OrthogonalityEvent]:
    """Find orthogonality events of a sampled trajectory.

    Grid-local minima of each selected track (ignoring samples flagged as
    degenerate and the two endpoints) are refined by golden-section search
    on the continuous model to an absolute time tolerance of
    ``REFINE_TOL_FACTOR * t_end``; refined minima below ``threshold``
    become events, sorted by time.

    The threshold must sit in (0, 0.5): above 0.5 the "events" would not
    be near-orthogonal at all, since generic overlap magnitudes hover
    around 1/sqrt(2).
    """
    if not 0.0 < threshold < 0.5:
        raise ValueError(f"threshold {threshold} outside the open interval (0, 0.5)")
    if isinstance(tracks, str):
        tracks = (tracks,)
    for name in tracks:
        if name not in TRACK_NAMES:
            raise ValueError(f"unknown track {name!r}, expected one of {TRACK_NAMES}")
    if series.evaluate is None:
        raise ValueError("series carries no continuous model to refine against")
    if series.grid.samples < 3 or series.grid.t_end <= 0.0:
        return []

    times = series.grid.values
    xtol = REFINE_TOL_FACTOR * series.grid.t_end
    flagged = series.degenerate
    events: list[OrthogonalityEvent] = []
    for name in tracks:
        y = series.track(name)
        f = _track_evaluator(series, name)
        for k in range(1, len(y) - 1):
            if flagged[k - 1] or flagged[k] or flagged[k + 1]:
                continue
            if y[k] < y[k - 1] and y[k] <= y[k + 1]:
                t_star, v_star = golden_section_minimize(
                    f, float(times[k - 1]), float(times[k + 1]), xtol)
                if v_star < threshold:
                    events.append(OrthogonalityEvent(t_star, v_star, name))
    events.sort(key=lambda e: (e.t_event, e.channel))
    return events


def speed_metrics(events, window_end: float) -> SpeedMetrics:
    """Fold an event list into speed statistics over [0, window_end].

    Order-insensitive: events are sorted internally, so any permutation of
    the same list gives a bit-identical result. With no events the first
    orthogonality time is None and the rate is zero.
    """
    if not window_end > 0.0:
        raise ValueError("window_end must be positive")
    times = sorted(e.t_event for e in events)
    count = len(times)
    return SpeedMetrics(
        first_orthogonality_time=times[0] if times else None,
        event_count=count,
        events_per_unit_time=count / window_end,
        window_end=window_end,
    )


# Sweepable parameter -> dataclass field, per model. "alpha" sets all
# three drive strengths at once.
SWEEP_PARAMS = {
    "classical": {"alpha": None, "alpha1": "alpha1", "alpha2": "alpha2",
                  "alpha3": "alpha3"},
    "jc": {"eta": "eta", "detuning": "delta_over_gamma", "gamma": "gamma",
           "photons": "photons"},
}


def apply_sweep_value(model: str, base, param: str, value: float):
    """Return a copy of the base parameter record with one field replaced."""
    try:
        field = SWEEP_PARAMS[model][param]
    except KeyError:
        raise ValueError(
            f"parameter {param!r} cannot be swept for model {model!r}; "
            f"choose from {sorted(SWEEP_PARAMS.get(model, {}))}")
    if param == "alpha":
        return ClassicalFieldParams(value, value, value)
    if param == "photons":
        rounded = round(value)
        if abs(value - rounded) > 1e-9 or rounded < 0:
            raise ValueError(f"photons grid value {value} is not a nonnegative integer")
        return replace(base, photons=int(rounded))
    return replace(base, **{field: value})


def _sweep_point(args) -> SpeedMetrics:
    model, base, s0, grid, param, value, threshold, tracks = args
    params = apply_sweep_value(model, base, param, value)
    if model == "classical":
        traj = classical_trajectory(s0, params, grid)
    else:
        traj = jc_trajectory(s0, params, grid)
    events = detect_events(traj, threshold=threshold, tracks=tracks)
    return speed_metrics(events, grid.t_end)


def sweep(model: str, base, s0: BlochVector, grid: TimeGrid, param: str,
          values, threshold: float = DEFAULT_THRESHOLD, tracks=("sp11",),
          jobs: int = 1) -> SweepResult:
    """Speed metrics across a one-parameter family of runs.

    One trajectory and one event detection per parameter value. Results
    follow the order of ``values`` no matter how the points are scheduled;
    with ``jobs > 1`` the points run in a process pool and are collected
    in submission order, so the output is identical to the serial run.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one parameter value")
    if isinstance(tracks, str):
        tracks = (tracks,)
    tracks = tuple(tracks)
    # Validate all points up front so a bad grid fails before any work runs.
    for v in values:
        apply_sweep_value(model, base, param, v)

    tasks = [(model, base, s0, grid, param, v, threshold, tracks) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            metrics = list(pool.map(_sweep_point, tasks))
    else:
        metrics = [_sweep_point(task) for task in tasks]

    rates = [m.events_per_unit_time for m in metrics]
    argmax = int(np.argmax(rates))
    argmin = int(np.argmin(rates))
    return SweepResult(param=param, values=tuple(values), metrics=tuple(metrics),
                       argmax_index=argmax, argmin_index=argmin)
