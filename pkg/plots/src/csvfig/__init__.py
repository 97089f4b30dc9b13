"""Figures from sweep CSVs: log-scale lines, markers as gaps."""

from .core import (
    build_figure,
    default_group,
    default_x,
    default_ys,
    numeric_column,
    read_table,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "read_table",
    "numeric_column",
    "default_x",
    "default_ys",
    "default_group",
    "build_figure",
    "render",
    "__version__",
]
