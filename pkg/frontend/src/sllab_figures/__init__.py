"""Render the four sllab panel grids (v, u, v - u, phase) into one image."""

__version__ = "0.1.0"

from .render import PanelSpec, default_specs, read_grid_csv, render

__all__ = ["PanelSpec", "default_specs", "read_grid_csv", "render",
           "__version__"]
