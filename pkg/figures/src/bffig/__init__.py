"""Figure rendering for simulation run artifacts."""

from .render import (
    SchemaError,
    load_heatmap,
    load_raster,
    load_summary,
    render_heatmap,
    render_raster,
)

__all__ = [
    "SchemaError",
    "load_heatmap",
    "load_raster",
    "load_summary",
    "render_heatmap",
    "render_raster",
]

__version__ = "0.1.0"
