"""Figure rendering for report objects.

Each renderer takes a Report produced by the experiments module and
writes one figure file next to the delimited output.  Rendering is
opt-in from the CLI; the data files remain the primary artifact.
"""

from __future__ import annotations

from pathlib import Path

from .reporting import Report


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_fer_waterfall(report: Report, path: str | Path) -> None:
    """FER versus Eb/N0, one curve per aggregation setting and code."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for row in report.rows:
        series.setdefault((row["code"], row["t"]), []).append(
            (row["ebn0_db"], row["fer"]))
    for (code, t), pts in series.items():
        pts.sort()
        ax.semilogy([x for x, _ in pts], [y for _, y in pts],
                    marker="o", label=f"{code} {t}")
    ax.set_xlabel("$E_b/N_0$ (dB)")
    ax.set_ylabel("FER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_entropy_curve(report: Report, path: str | Path) -> None:
    """Residue entropy versus aggregation modulus with its limit line."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ts = [row["t"] for row in report.rows]
    hs = [row["h_mod_t"] for row in report.rows]
    code = report.rows[0]["code"] if report.rows else "?"
    ax.plot(ts, hs, marker="o", label=f"{code}: H(residue mod T)")
    h_lim = report.meta.get("h_delta_s")
    if h_lim is not None:
        ax.axhline(h_lim, linestyle="--", color="gray",
                   label=f"H(gain/loss) = {h_lim:.3f}")
    ax.set_xlabel("aggregation modulus T")
    ax.set_ylabel("entropy (bits)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_cost_curve(report: Report, path: str | Path) -> None:
    """Combined-decoding cost ratio and disagreement rate versus Eb/N0."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [row["ebn0_db"] for row in report.rows]
    ax.plot(xs, [row["ratio_mtd_direct"] for row in report.rows],
            marker="o", label="combined cost / direct cost")
    ax.plot(xs, [row["rho"] for row in report.rows],
            marker="s", label="disagreement rate rho")
    if report.rows:
        ax.axhline(report.rows[0]["rho_star"], linestyle=":",
                   color="gray", label=f"rho* = {report.rows[0]['rho_star']:.3f}")
    ax.axhline(1.0, linestyle="--", color="black", linewidth=0.8)
    crossing = report.meta.get("crossing_ebn0")
    if crossing is not None:
        ax.axvline(crossing, linestyle="--", color="red", linewidth=0.8,
                   label=f"break-even {crossing:.2f} dB")
    ax.set_xlabel("$E_b/N_0$ (dB)")
    ax.set_ylabel("ratio")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_delta_pmf(report: Report, path: str | Path) -> None:
    """Gain/loss distributions of the analyzed codes, log scale."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    pmfs = report.meta.get("delta_pmf", {})
    for code, pairs in pmfs.items():
        xs = [e for e, _ in pairs]
        ys = [c for _, c in pairs]
        ax.semilogy(xs, ys, marker=".", linestyle="-", linewidth=0.8,
                    label=code)
    ax.set_xlabel("gain/loss (decoded - emitted symbols)")
    ax.set_ylabel("probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


RENDERERS = {
    "fer_sweep": render_fer_waterfall,
    "entropy_convergence": render_entropy_curve,
    "cost_comparison": render_cost_curve,
    "criteria": render_delta_pmf,
}


def render(report: Report, path: str | Path) -> None:
    """Dispatch on the report kind recorded in its metadata."""
    kind = report.meta.get("kind")
    try:
        renderer = RENDERERS[kind]
    except KeyError:
        raise ValueError(f"no renderer for report kind {kind!r}") from None
    renderer(report, path)
