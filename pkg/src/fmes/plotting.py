"""Optional matplotlib renderings for the report path.

Charts are written to files next to the delimited output; nothing here
runs unless a --plot destination is given.  The Agg backend keeps the
package headless.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_dims_chart(rows: list[dict], path: str, title: str) -> None:
    """Bar chart of graded dimensions per weight."""
    weights = [r["weight"] for r in rows]
    dims = [r["dim"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.bar(weights, dims, color="#32639b")
    for x, y in zip(weights, dims):
        ax.annotate(str(y), (x, y), textcoords="offset points", xytext=(0, 2),
                    ha="center", fontsize=8)
    ax.set_xlabel("weight")
    ax.set_ylabel("dimension")
    ax.set_title(title)
    ax.set_xticks(weights)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_suite_chart(report, path: str) -> None:
    """Horizontal bars of per-check runtimes, colored by status."""
    results = report.sorted_results()
    colors = {"pass": "#3b7a3b", "fail": "#b03030", "finding": "#b08a30"}
    fig, ax = plt.subplots(figsize=(7.0, max(2.0, 0.28 * len(results) + 1)))
    ys = range(len(results))
    ax.barh(list(ys), [r.seconds for r in results],
            color=[colors[r.status] for r in results])
    ax.set_yticks(list(ys))
    ax.set_yticklabels([r.check_id for r in results], fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    ax.set_title(f"suite {report.suite}: {len(results)} checks, "
                 f"{report.failed} failures")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
