"""Line figures rendered next to sweep output files.

The sweep report path can emit a quick-look figure alongside the CSV:
entanglement against the cut parameter (one series per chain length
and temperature) when the sweep covers several grid points, or against
temperature when it covers a single point.  Output is deterministic
for identical input rows.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import STATUS_OK, SweepRow

matplotlib.rcParams["svg.hashsalt"] = "kkchain"

# keep image bytes reproducible: no timestamps in PNG or SVG output
_SAVE_METADATA = {
    ".png": {"Software": "kkchain"},
    ".svg": {"Date": None},
}


def _save_metadata(path: str) -> dict | None:
    for suffix, metadata in _SAVE_METADATA.items():
        if path.lower().endswith(suffix):
            return metadata
    return None


def render_sweep_figure(rows: list[SweepRow], path: str) -> None:
    """Render entanglement rows to an image file.

    Error-status rows are dropped.  With more than one grid point the
    x axis is the j_spin cut parameter and each (n_sites, temperature)
    pair becomes a series; with a single grid point the x axis is
    temperature and each chain length becomes a series.  Raises
    ValueError when no plottable rows remain.
    """
    good = [row for row in rows if row.status == STATUS_OK]
    if not good:
        raise ValueError("no data: every input row is empty or error-marked")

    grid_points = sorted({(row.j_spin, row.i_pseudo) for row in good})
    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=150)
    k = good[0].k_coupling

    if len(grid_points) > 1:
        series_keys = sorted({(row.n_sites, row.temperature) for row in good})
        for n, temperature in series_keys:
            pts = sorted(
                (row.j_spin, row.log_negativity)
                for row in good
                if row.n_sites == n and row.temperature == temperature
            )
            ax.plot(
                [p[0] for p in pts],
                [p[1] for p in pts],
                marker="o",
                markersize=3,
                label=f"N={n}, T={temperature:g}",
            )
        ax.set_xlabel("cut parameter j_spin")
    else:
        series_keys = sorted({row.n_sites for row in good})
        j, i = grid_points[0]
        for n in series_keys:
            pts = sorted(
                (row.temperature, row.log_negativity) for row in good if row.n_sites == n
            )
            ax.plot(
                [p[0] for p in pts],
                [p[1] for p in pts],
                marker="o",
                markersize=3,
                label=f"N={n}, J={j:g}, I={i:g}",
            )
        ax.set_xlabel("temperature")

    ax.set_ylabel("logarithmic negativity")
    ax.set_title(f"spin/pseudospin entanglement (K={k:g})")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_save_metadata(path))
    plt.close(fig)
