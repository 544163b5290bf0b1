"""Delimited report files: formatting, metadata header, atomic writes.

Every file starts with '#'-prefixed key=value metadata lines (mode,
parameters, conventions, version) followed by a CSV header and data rows.
Reals are written in scientific notation at 15 significant digits, so two
runs with identical configuration produce byte-identical files. Files are
written to a temporary sibling and renamed into place, so readers never
observe a half-written report.
"""

import os
import tempfile

import numpy as np

from . import __version__

SERIES_HEADER = ("t,sx,sy,sz,purity,fidelity,"
                 "abs_sp_11,abs_sp_12,abs_sp_21,abs_sp_22,degenerate")
SWEEP_HEADER = "value,event_count,first_orthogonality_time,events_per_unit_time"
COMPARE_HEADER = ("t,sx_block,sy_block,sz_block,sx_printed,sy_printed,sz_printed,"
                  "max_component_deviation,imag_residual")
EVENTS_HEADER = "t_event,min_value,channel"

# Conventions recorded into every report so a file is self-describing.
CONVENTIONS = {
    "eigenvalue_order": "descending",
    "eigenvector_phase": "largest_component_real_nonnegative",
    "tensor_order": "qubit_major",
    "degeneracy_gap": "1e-09",
}


def fmt_real(x: float) -> str:
    """Scientific notation, 15 significant digits."""
    return f"{x:.14e}"


def _meta_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def metadata_lines(meta: dict) -> list[str]:
    lines = [f"# qspeed_version={__version__}"]
    for key, value in meta.items():
        lines.append(f"# {key}={_meta_value(value)}")
    for key, value in CONVENTIONS.items():
        lines.append(f"# {key}={value}")
    return lines


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temporary sibling plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".qspeed-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        # mkstemp creates 0600; give the report the ordinary umask-governed mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp_path, 0o666 & ~umask)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def write_series_csv(path: str, series, extra_meta: dict) -> None:
    meta = dict(series.metadata)
    meta.update(extra_meta)
    lines = metadata_lines(meta)
    lines.append(SERIES_HEADER)
    t = series.grid.values
    mags = series.magnitudes
    for k in range(len(series)):
        row = [fmt_real(t[k]),
               fmt_real(series.bloch[k, 0]),
               fmt_real(series.bloch[k, 1]),
               fmt_real(series.bloch[k, 2]),
               fmt_real(series.purity[k]),
               fmt_real(series.fidelity[k]),
               fmt_real(mags[k, 0, 0]),
               fmt_real(mags[k, 0, 1]),
               fmt_real(mags[k, 1, 0]),
               fmt_real(mags[k, 1, 1]),
               "1" if series.degenerate[k] else "0"]
        lines.append(",".join(row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_sweep_csv(path: str, result, extra_meta: dict) -> None:
    meta = dict(extra_meta)
    meta["param"] = result.param
    meta["argmax_value"] = result.values[result.argmax_index]
    meta["argmin_value"] = result.values[result.argmin_index]
    lines = metadata_lines(meta)
    lines.append(SWEEP_HEADER)
    for value, m in zip(result.values, result.metrics):
        first = ("" if m.first_orthogonality_time is None
                 else fmt_real(m.first_orthogonality_time))
        lines.append(",".join([fmt_real(value), str(m.event_count), first,
                               fmt_real(m.events_per_unit_time)]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_compare_csv(path: str, times, block: np.ndarray, printed: np.ndarray,
                      residual: np.ndarray, extra_meta: dict) -> None:
    deviation = np.max(np.abs(block - printed), axis=1)
    lines = metadata_lines(extra_meta)
    lines.append(COMPARE_HEADER)
    for k in range(len(times)):
        row = [fmt_real(times[k])]
        row += [fmt_real(v) for v in block[k]]
        row += [fmt_real(v) for v in printed[k]]
        row.append(fmt_real(deviation[k]))
        row.append(fmt_real(residual[k]))
        lines.append(",".join(row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_events_csv(path: str, events, extra_meta: dict) -> None:
    lines = metadata_lines(extra_meta)
    lines.append(EVENTS_HEADER)
    for ev in events:
        lines.append(",".join([fmt_real(ev.t_event), fmt_real(ev.min_value),
                               ev.channel]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_run_metadata(path: str) -> dict:
    """Parse the key=value comment block of a report file."""
    meta: dict[str, str] = {}
    with open(path, "r") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
    return meta
