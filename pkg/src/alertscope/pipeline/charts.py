"""SVG charts for the CT analytics, rendered reproducibly."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
from matplotlib.figure import Figure  # noqa: E402

_SVG_OPTS = {"format": "svg", "metadata": {"Date": None}}


def _save(fig: Figure, path: Path) -> Path:
    # fixed salt keeps element ids stable between runs
    with matplotlib.rc_context({"svg.hashsalt": "alertscope", "svg.fonttype": "none"}):
        fig.savefig(path, **_SVG_OPTS)
    return path


def market_share_chart(ct, path: Path) -> Path:
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    years = sorted(ct.shares)
    for ca in ct.top + ["other"]:
        ax.plot(years, [100 * ct.shares[y].get(ca, 0.0) for y in years], marker="o", label=ca)
    ax.set_xlabel("year")
    ax.set_ylabel("hosts covered (%)")
    ax.set_title("Market share of top CAs")
    ax.legend(fontsize="small", ncol=2)
    return _save(fig, path)


def san_sharing_chart(ct, path: Path) -> Path:
    fig = Figure(figsize=(7, 3.5))
    ax = fig.add_subplot()
    years = sorted(ct.san)
    ax.bar([str(y) for y in years], [100 * ct.san[y] for y in years])
    ax.set_ylabel("hosts (%)")
    ax.set_title(f"Hosts behind certificates with more than {ct.san_threshold} SANs")
    return _save(fig, path)


def validity_chart(ct, path: Path) -> Path:
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    years = sorted(ct.validity)
    stats = [{"label": str(y), "whislo": s.minimum, "q1": s.q1, "med": s.median,
              "q3": s.q3, "whishi": s.maximum, "fliers": []}
             for y, s in ((y, ct.validity[y]) for y in years)]
    if stats:
        ax.bxp(stats, showfliers=False)
    ax.set_ylabel("validity (days)")
    ax.set_title("Validity of logged certificates by issuance year")
    return _save(fig, path)


def write_charts(ct, out: Path) -> list[Path]:
    out = Path(out)
    return [market_share_chart(ct, out / "market_share.svg"),
            san_sharing_chart(ct, out / "san_sharing.svg"),
            validity_chart(ct, out / "validity.svg")]
