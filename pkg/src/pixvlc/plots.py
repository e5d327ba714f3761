"""Figures written next to the CLI's delimited output.

Every function takes already-computed rows, draws one figure and saves it
to ``path`` (format from the suffix: .png, .pdf, .svg).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (5.0, 3.4),
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    # fixed metadata keeps repeated renders byte-identical
    "svg.hashsalt": "pixvlc",
}
_METADATA = {
    ".png": {"Software": None},
    ".pdf": {"Creator": None, "Producer": None, "CreationDate": None},
    ".svg": {"Date": None},
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=_METADATA.get(path.suffix.lower()))
    plt.close(fig)
    return path


def ber_curve(rows, order, path, target_ber=None):
    """BER against SNR; rows carry ``snr_db``, ``analytic_ber`` and optionally ``mc_ber``."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        snr = [r["snr_db"] for r in rows]
        ax.semilogy(snr, [r["analytic_ber"] for r in rows], "-", label="analytic")
        mc = [(r["snr_db"], r["mc_ber"], r.get("ci95", 0.0)) for r in rows if r.get("mc_ber")]
        if mc:
            xs, ys, es = zip(*mc)
            ax.errorbar(xs, ys, yerr=es, fmt="o", ms=3, capsize=2, label="Monte Carlo")
        if target_ber:
            ax.axhline(target_ber, color="0.4", ls="--", lw=0.8, label=f"target {target_ber:g}")
        ax.set_xlabel("SNR (dB)")
        ax.set_ylabel("bit-error rate")
        ax.set_title(f"{order}-PAM")
        ax.legend()
        return _save(fig, path)


def adaptation(decisions, path, calibration=None):
    """Chosen throughput and SNR against distance."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ds = [d.distance_m for d in decisions]
        ax.step(ds, [d.throughput_bps for d in decisions], where="mid", color="C0")
        ax.plot(ds, [d.throughput_bps for d in decisions], "o", color="C0", ms=4)
        ax.set_xlabel("distance (m)")
        ax.set_ylabel("throughput (bps)", color="C0")
        ax2 = ax.twinx()
        ax2.grid(False)
        ax2.plot(ds, [d.snr_db for d in decisions], "s--", color="C1", ms=3, label="model SNR")
        if calibration:
            ax2.plot(*zip(*calibration), "x", color="C3", label="calibration")
        ax2.set_ylabel("SNR (dB)", color="C1")
        ax2.legend(loc="upper right")
        return _save(fig, path)


def sweep_grid(cells, path):
    """Measured and analytic BER per order against distance."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        flat = [c for row in cells for c in row if c.ok]
        for i, order in enumerate(sorted({c.order for c in flat})):
            pts = sorted((c.distance_m, c.result) for c in flat if c.order == order)
            ds = [d for d, _ in pts]
            ax.semilogy(ds, [r.analytic_ber for _, r in pts], "-", color=f"C{i}", label=f"{order}-PAM analytic")
            meas = [(d, r.measured_ber) for d, r in pts if r.bit_errors > 0]
            if meas:
                ax.semilogy(*zip(*meas), "o", color=f"C{i}", ms=4, label=f"{order}-PAM measured")
        ax.set_xlabel("distance (m)")
        ax.set_ylabel("bit-error rate")
        ax.legend(ncol=2)
        return _save(fig, path)


def budget(result, path):
    """Harvested versus consumed power."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(3.6, 3.0))
        colors = ["C2", "C2" if result.feasible else "C3"]
        ax.bar(["harvested", "consumed"], [result.harvested_uW, result.consumed_uW], color=colors)
        ax.set_ylabel("power (µW)")
        verdict = "feasible" if result.feasible else "infeasible"
        ax.set_title(f"margin {result.margin_uW:.1f} µW ({verdict})")
        return _save(fig, path)
