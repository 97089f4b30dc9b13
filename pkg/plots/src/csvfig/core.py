"""CSV reading and figure construction.

The tables this consumes are benchmark sweeps: one header row, then data
rows whose cells are either decimal numbers or the markers `FAIL` / empty
for quantities that could not be computed.  Markers become NaN, which
matplotlib draws as a gap in the line — a missing result must be visible
as missing, never interpolated over.

Some sweeps append summary rows (a fitted slope, say) whose first cell is
not a number; rows whose x-cell fails to parse are dropped entirely.
"""

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "read_table",
    "numeric_column",
    "default_x",
    "default_ys",
    "default_group",
    "build_figure",
    "render",
]

# one fixed look, so reruns produce identical files
FIGSIZE = (6.4, 4.4)
DPI = 120
MARKERS = ["o", "s", "^", "d", "v", "x", "*", "+"]


def _to_float(cell):
    try:
        return float(cell)
    except ValueError:
        return float("nan")


def read_table(path):
    """Header names and data rows (lists of strings) from a CSV file."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError("%s: empty file" % (path,))
    return rows[0], rows[1:]


def numeric_column(header, rows, name):
    """Column as floats; FAIL and empty cells (or any non-number) are NaN."""
    i = header.index(name)
    return np.array([_to_float(r[i]) for r in rows])


def default_x(header, rows):
    """First column that is numeric throughout and not constant."""
    for name in header:
        col = numeric_column(header, rows, name)
        if np.all(np.isfinite(col)) and len(np.unique(col)) > 1:
            return name
    raise ValueError("no usable x column found")


def default_ys(header, rows, x, group, logy):
    """Every remaining column with data worth drawing; on a log axis a
    column needs at least one positive finite value, and a column that
    never changes carries nothing worth a line."""
    out = []
    for name in header:
        if name == x or name == group:
            continue
        col = numeric_column(header, rows, name)
        good = np.isfinite(col)
        if not np.any(good):
            continue
        if len(np.unique(col[good])) == 1:
            continue
        if logy and not np.any(col[good] > 0.0):
            continue
        out.append(name)
    return out


def default_group(header, rows, x):
    """A single low-cardinality text column marks a series split."""
    for name in header:
        if name == x:
            continue
        col = numeric_column(header, rows, name)
        if np.any(np.isfinite(col)):
            continue
        i = header.index(name)
        values = [r[i] for r in rows]
        if 2 <= len(dict.fromkeys(values)) <= 12:
            return name
    return None


def build_figure(path, x=None, ys=None, group_by=None, logy=True, title=None):
    """Figure with one line per y column and per group value.

    Rows whose x cell is not numeric are dropped (summary footers); FAIL
    and empty y cells stay in as NaN so the line breaks there.
    """
    header, rows = read_table(path)
    if x is None:
        x = default_x(header, rows)
    xcol_all = numeric_column(header, rows, x)
    rows = [r for r, v in zip(rows, xcol_all) if np.isfinite(v)]
    if group_by is None:
        group_by = default_group(header, rows, x)
    if ys is None:
        ys = default_ys(header, rows, x, group_by, logy)
    if not ys:
        raise ValueError("%s: nothing to plot" % (path,))

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    if group_by is None:
        groups = [(None, rows)]
    else:
        gi = header.index(group_by)
        keys = list(dict.fromkeys(r[gi] for r in rows))
        groups = [(k, [r for r in rows if r[gi] == k]) for k in keys]

    series = 0
    for gval, grows in groups:
        xs = numeric_column(header, grows, x)
        for name in ys:
            yvals = numeric_column(header, grows, name)
            if gval is None:
                label = name
            elif len(ys) == 1:
                label = "%s=%s" % (group_by, gval)
            else:
                label = "%s, %s=%s" % (name, group_by, gval)
            ax.plot(xs, yvals, marker=MARKERS[series % len(MARKERS)],
                    markersize=4, linewidth=1.2, label=label)
            series += 1

    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(x)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title if title is not None else "")
    fig.tight_layout()
    return fig


def render(path, out, **kwargs):
    """Write the figure for one CSV to a PNG file, reproducibly."""
    fig = build_figure(path, **kwargs)
    try:
        fig.savefig(out, format="png", dpi=DPI,
                    metadata={"Software": "csvfig"})
    finally:
        plt.close(fig)
    return out
