"""Figure rendering for run reports.

Figures are written straight to files (no interactive backend) next to
the CSV output. Rendering is kept deterministic: a fixed hash salt for
SVG element ids and no creation-date metadata.
"""

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "qspeed"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_TRACK_STYLE = {
    "sp11": dict(ls="-", color="tab:blue"),
    "sp12": dict(ls="--", color="tab:orange"),
    "sp21": dict(ls="-.", color="tab:green"),
    "sp22": dict(ls=":", color="tab:red"),
    "fidelity": dict(ls="-", color="tab:purple"),
}

_AXIS_LABEL = {"t": "t", "gamma_t": r"$\gamma t$"}


def _save(fig, path: str) -> None:
    lower = str(path).lower()
    kwargs = {}
    if lower.endswith(".svg"):
        kwargs["metadata"] = {"Date": None}
    elif lower.endswith(".pdf"):
        kwargs["metadata"] = {"CreationDate": None}
    fig.savefig(path, bbox_inches="tight", **kwargs)
    plt.close(fig)


def render_series_figure(series, tracks, events, path: str) -> None:
    """One line per selected track, with thin markers at event times."""
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    t = series.grid.values
    for name in tracks:
        ax.plot(t, series.track(name), lw=1.2, label=name,
                **_TRACK_STYLE.get(name, {}))
    for ev in events:
        ax.axvline(ev.t_event, color="0.75", lw=0.6, zorder=0)
    axis = series.metadata.get("time_axis", "t")
    ax.set_xlabel(_AXIS_LABEL.get(axis, "t"))
    ax.set_ylabel("track value")
    ax.set_ylim(-0.02, 1.05)
    ax.grid(alpha=0.3)
    ax.legend(loc="upper right", fontsize=9)
    ax.set_title(series.metadata.get("model", "run"))
    _save(fig, path)


def render_sweep_figure(result, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(result.values, result.rates, "o-", lw=1.2, ms=4, color="tab:blue")
    ax.axvline(result.critical_value, color="tab:red", lw=0.8, ls="--",
               label=f"argmax at {result.critical_value:g}")
    ax.set_xlabel(result.param)
    ax.set_ylabel("events per unit time")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=9)
    _save(fig, path)


def render_compare_figure(times, block, printed, residual, path: str) -> None:
    """Block-propagation components vs the printed closed form."""
    fig, axes = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    labels = ("sx", "sy", "sz")
    for k, lab in enumerate(labels):
        axes[0].plot(times, block[:, k], lw=1.2, label=f"{lab} (block)")
        axes[0].plot(times, printed[:, k], lw=0.9, ls="--", label=f"{lab} (printed)")
    axes[0].set_ylabel("Bloch component")
    axes[0].legend(fontsize=8, ncol=3)
    axes[0].grid(alpha=0.3)
    axes[1].semilogy(times[1:], residual[1:] + 1e-300, lw=1.0, color="tab:red")
    axes[1].set_ylabel("imaginary residual")
    axes[1].set_xlabel("t")
    axes[1].grid(alpha=0.3)
    _save(fig, path)
