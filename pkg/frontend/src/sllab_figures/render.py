"""Four-panel rendering of the grid CSVs written by `sllab figure`.

Input files use the grid CSV format: a first line with the node count per
side m, then m rows of m comma-separated values over [-1, 1]^2.  The panels
are laid out 2 x 2 in the order v, u, v - u, phase.  The default render
mode is a heatmap (robust headless); surface mode draws 3-D surfaces.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PANEL_FILES = ("vfig.csv", "ufig.csv", "vsubufig.csv", "phasefig.csv")
PANEL_TITLES = (
    "(a)  v = 1/4 - |x| + (1/2)|y|^{3/2}",
    "(b)  u(x, y) = -v(y, x)",
    "(c)  v - u: strict interior maximum",
    "(d)  phase f: continuous, kinked on the axes",
)


class PanelError(ValueError):
    """Raised for a missing or malformed panel CSV."""


@dataclass(frozen=True)
class PanelSpec:
    csv_path: str
    title: str
    mode: str = "heatmap"

    def __post_init__(self):
        if self.mode not in ("heatmap", "surface"):
            raise PanelError(f"unknown render mode {self.mode!r}")


def read_grid_csv(path) -> np.ndarray:
    """Square grid values from a grid CSV (m header line, then rows)."""
    if not os.path.exists(path):
        raise PanelError(f"{path}: no such file")
    with open(path) as fh:
        first = fh.readline().strip()
        if not first:
            raise PanelError(f"{path}: empty grid file")
        try:
            m = int(first)
        except ValueError:
            raise PanelError(f"{path}: bad header line {first!r}") from None
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise PanelError(f"{path}: {exc}") from None
    if data.shape != (m, m):
        raise PanelError(f"{path}: expected {m}x{m} values, got {data.shape}")
    if not np.all(np.isfinite(data)):
        raise PanelError(f"{path}: non-finite values")
    return data


def default_specs(directory: str, mode: str = "heatmap") -> list[PanelSpec]:
    return [PanelSpec(os.path.join(directory, name), title, mode)
            for name, title in zip(PANEL_FILES, PANEL_TITLES)]


def render(panel_specs: list[PanelSpec], out_image: str) -> None:
    """One 2 x 2 image from four panel specs, written to out_image."""
    if len(panel_specs) != 4:
        raise PanelError(f"expected 4 panel specs, got {len(panel_specs)}")
    grids = [read_grid_csv(spec.csv_path) for spec in panel_specs]
    surface = any(spec.mode == "surface" for spec in panel_specs)
    fig = plt.figure(figsize=(9, 8))
    for i, (spec, values) in enumerate(zip(panel_specs, grids)):
        m = values.shape[0]
        axis = np.linspace(-1.0, 1.0, m)
        if spec.mode == "surface":
            ax = fig.add_subplot(2, 2, i + 1, projection="3d")
            gx, gy = np.meshgrid(axis, axis, indexing="ij")
            ax.plot_surface(gx, gy, values, cmap="viridis",
                            rcount=min(m, 64), ccount=min(m, 64))
        else:
            ax = fig.add_subplot(2, 2, i + 1)
            # values are row-major in x, so transpose for (x right, y up)
            im = ax.imshow(values.T, origin="lower", extent=(-1, 1, -1, 1),
                           cmap="viridis", aspect="equal")
            fig.colorbar(im, ax=ax, shrink=0.85)
        ax.set_title(spec.title, fontsize=10)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    fig.suptitle("The case n = 2, k = 1 on the unit square", fontsize=12)
    fig.tight_layout(rect=(0, 0, 1, 0.96) if not surface else None)
    fig.savefig(out_image, dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figure1",
        description="render the four sllab panel CSVs into one image")
    parser.add_argument("directory",
                        help="directory holding vfig/ufig/vsubufig/phasefig CSVs")
    parser.add_argument("--out", default="fig1.png")
    parser.add_argument("--mode", choices=("heatmap", "surface"),
                        default="heatmap")
    args = parser.parse_args(argv)
    try:
        render(default_specs(args.directory, args.mode), args.out)
    except PanelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
