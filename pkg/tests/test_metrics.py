import math

import numpy as np
import pytest

from qspeed.classical import ClassicalFieldParams, classical_trajectory
from qspeed.jaynes_cummings import JCParams, jc_trajectory
from qspeed.metrics import (
    OrthogonalityEvent,
    apply_sweep_value,
    detect_events,
    golden_section_minimize,
    speed_metrics,
    sweep,
)
from qspeed.series import TimeGrid
from qspeed.states import BlochVector

HALF_PI = math.pi / 2.0
X0 = BlochVector(1.0, 0.0, 0.0)


def equal_alpha_series(alpha, t_end=6.0, samples=1201):
    p = ClassicalFieldParams(alpha, alpha, alpha)
    return classical_trajectory(X0, p, TimeGrid.uniform(t_end, samples))


def test_golden_section_smooth_minimum():
    t, v = golden_section_minimize(lambda x: (x - 1.3) ** 2 + 0.25, 0.0, 3.0, 1e-12)
    # values flatten to machine precision within ~sqrt(eps) of the minimum,
    # so the located abscissa cannot be sharper than that
    assert abs(t - 1.3) < 1e-7
    assert abs(v - 0.25) < 1e-12


def test_golden_section_kinked_minimum():
    # |x - 2| has no derivative at its minimum
    t, v = golden_section_minimize(lambda x: abs(x - 2.0), 0.5, 3.5, 1e-12)
    assert abs(t - 2.0) < 1e-9
    assert v < 1e-9


def test_golden_section_rejects_empty_bracket():
    with pytest.raises(ValueError):
        golden_section_minimize(lambda x: x, 1.0, 1.0, 1e-8)


def test_detect_events_known_zeros():
    # alpha_i = pi/2 gives sp11 zeros at t = 1, 3, 5
    events = detect_events(equal_alpha_series(HALF_PI))
    assert len(events) == 3
    for ev, expect in zip(events, (1.0, 3.0, 5.0)):
        assert abs(ev.t_event - expect) < 1e-6
        assert ev.min_value < 1e-6
        assert ev.channel == "sp11"


def test_detect_events_counts_grow_with_drive():
    counts = [len(detect_events(equal_alpha_series(a)))
              for a in (math.pi / 4.0, math.pi / 3.0, HALF_PI)]
    assert counts == [1, 2, 3]


def test_detect_events_endpoint_minimum_not_counted():
    # alpha = pi/4 has its second zero exactly at t = 6, the window edge,
    # where no bracket exists
    events = detect_events(equal_alpha_series(math.pi / 4.0))
    assert len(events) == 1
    assert abs(events[0].t_event - 2.0) < 1e-6


def test_detect_events_threshold_filters_shallow_dips():
    # single-axis drive from +z only wobbles the direction by 30 degrees,
    # so sp11 has periodic local minima that never come near zero
    p = ClassicalFieldParams(HALF_PI, 0.0, 0.0)
    series = classical_trajectory(BlochVector(0.0, 0.0, 1.0), p,
                                  TimeGrid.uniform(6.0, 1201))
    sp11 = series.track("sp11")
    assert 0.9 < sp11[1:-1].min() < 1.0
    assert detect_events(series, threshold=0.4) == []


def test_detect_events_sp12_marks_returns():
    # the off-diagonal overlap vanishes when the state comes back to the
    # initial direction, giving events at the revival times
    events = detect_events(equal_alpha_series(HALF_PI), tracks=("sp12",))
    assert [round(e.t_event, 6) for e in events] == [2.0, 4.0]


def test_detect_events_argument_validation():
    series = equal_alpha_series(HALF_PI)
    with pytest.raises(ValueError):
        detect_events(series, threshold=0.7)
    with pytest.raises(ValueError):
        detect_events(series, threshold=0.0)
    with pytest.raises(ValueError):
        detect_events(series, tracks=("sp99",))


def test_detect_events_multi_track_sorted():
    series = equal_alpha_series(HALF_PI)
    events = detect_events(series, tracks=("sp11", "sp22"))
    # sp22 mirrors sp11 by unitarity, so every instant appears twice
    assert len(events) == 6
    times = [e.t_event for e in events]
    assert times == sorted(times)
    assert {e.channel for e in events} == {"sp11", "sp22"}


def test_detect_events_skips_degenerate_brackets():
    # straight line through the maximally mixed state: sp11 has a grid
    # minimum next to the degenerate sample, but no honest zero
    evolve = lambda t: BlochVector(1.0 - t, 0.0, 0.0)
    from qspeed.series import build_series
    grid = TimeGrid.uniform(2.0, 41)
    series = build_series(X0, evolve, grid, {})
    assert series.degenerate.any()
    assert detect_events(series, threshold=0.4) == []


def test_refined_time_beats_grid_resolution():
    # coarse grid, exact zero at t = 1: refinement must recover it to far
    # better than the 0.06 spacing
    series = equal_alpha_series(HALF_PI, samples=101)
    events = detect_events(series)
    assert abs(events[0].t_event - 1.0) < 1e-6


def test_speed_metrics_basic():
    events = [OrthogonalityEvent(3.0, 0.0, "sp11"),
              OrthogonalityEvent(1.0, 0.0, "sp11"),
              OrthogonalityEvent(5.0, 0.0, "sp11")]
    m = speed_metrics(events, 6.0)
    assert m.first_orthogonality_time == 1.0
    assert m.event_count == 3
    assert abs(m.events_per_unit_time - 0.5) < 1e-15
    assert m.window_end == 6.0


def test_speed_metrics_empty_and_permutation():
    empty = speed_metrics([], 10.0)
    assert empty.first_orthogonality_time is None
    assert empty.event_count == 0
    assert empty.events_per_unit_time == 0.0
    events = [OrthogonalityEvent(t, 0.0, "sp11") for t in (4.0, 0.5, 2.25)]
    a = speed_metrics(events, 5.0)
    b = speed_metrics(list(reversed(events)), 5.0)
    assert a == b
    with pytest.raises(ValueError):
        speed_metrics(events, 0.0)


def test_drive_rescaling_covariance():
    # scaling every alpha by k compresses time by k: counts match over the
    # matching window, event times divide by k, rates multiply by k
    k = 2.0
    base = detect_events(equal_alpha_series(HALF_PI, t_end=6.0))
    fast = detect_events(equal_alpha_series(k * HALF_PI, t_end=6.0 / k))
    assert len(fast) == len(base)
    for slow_ev, fast_ev in zip(base, fast):
        assert abs(fast_ev.t_event - slow_ev.t_event / k) < 1e-6
    m_base = speed_metrics(base, 6.0)
    m_fast = speed_metrics(fast, 6.0 / k)
    assert abs(m_fast.events_per_unit_time - k * m_base.events_per_unit_time) < 1e-12


def test_apply_sweep_value():
    base = ClassicalFieldParams(0.1, 0.2, 0.3)
    all_three = apply_sweep_value("classical", base, "alpha", 1.5)
    assert all_three.as_tuple() == (1.5, 1.5, 1.5)
    one = apply_sweep_value("classical", base, "alpha2", 0.9)
    assert one.as_tuple() == (0.1, 0.9, 0.3)
    jc = JCParams(eta=0.1, delta_over_gamma=0.5, photons=2)
    assert apply_sweep_value("jc", jc, "detuning", 1.25).delta_over_gamma == 1.25
    assert apply_sweep_value("jc", jc, "photons", 7.0).photons == 7
    with pytest.raises(ValueError):
        apply_sweep_value("jc", jc, "photons", 6.5)
    with pytest.raises(ValueError):
        apply_sweep_value("jc", jc, "alpha", 1.0)
    with pytest.raises(ValueError):
        apply_sweep_value("spin_chain", jc, "eta", 1.0)


def test_sweep_classical_rates():
    base = ClassicalFieldParams(0.0, 0.0, 0.0)
    grid = TimeGrid.uniform(6.0, 1201)
    result = sweep("classical", base, X0, grid, "alpha",
                   [math.pi / 4.0, math.pi / 3.0, HALF_PI])
    assert [m.event_count for m in result.metrics] == [1, 2, 3]
    assert result.argmax_index == 2
    assert result.argmin_index == 0
    assert result.critical_value == HALF_PI
    assert np.allclose(result.rates, [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0])


def test_sweep_parallel_matches_serial():
    base = JCParams(eta=0.1, delta_over_gamma=2.0, photons=6)
    grid = TimeGrid.uniform(30.0, 900)
    vals = list(np.linspace(0.05, 0.2, 4))
    serial = sweep("jc", base, X0, grid, "eta", vals, threshold=0.01)
    parallel = sweep("jc", base, X0, grid, "eta", vals, threshold=0.01, jobs=2)
    assert serial == parallel
    assert any(m.event_count > 0 for m in serial.metrics)


def test_sweep_rejects_bad_grid_values_before_running():
    base = JCParams(eta=0.1, delta_over_gamma=2.0)
    grid = TimeGrid.uniform(10.0, 100)
    with pytest.raises(ValueError):
        sweep("jc", base, X0, grid, "photons", [1.0, 2.5])
    with pytest.raises(ValueError):
        sweep("jc", base, X0, grid, "eta", [])
