"""Figures written next to the CSV/JSON reports.  Uses the Agg backend only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (7.0, 4.3)


def _finish(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)


def entropy_figure(report, path) -> None:
    """Output entropy of every input, sorted, with orbit classes of size 2 and 4 marked apart."""
    sizes = {}
    for c in report.orbit.classes:
        for x in c:
            sizes[x.value] = len(c)
    order = np.argsort(np.asarray(report.entropies), kind="stable")
    h = np.asarray(report.entropies)[order]
    s = np.array([sizes[int(v)] for v in order])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(FIGSIZE[0] * 1.5, FIGSIZE[1]))
    for size, marker in ((2, "o"), (4, ".")):
        sel = s == size
        ax1.plot(np.flatnonzero(sel), h[sel], marker, ms=3, ls="none", label=f"orbit size {size}")
    ax1.set_xlabel("input rank by entropy")
    ax1.set_ylabel("H(BDC output) [bits]")
    ax1.set_title(f"n={report.n}, d={report.d.text()}")
    ax1.legend(frameon=False)

    hist = report.orbit.size_histogram()
    ax2.bar([str(k) for k in hist], list(hist.values()), color="0.4")
    ax2.set_xlabel("class size")
    ax2.set_ylabel("number of classes")
    ax2.set_title(
        f"{len(report.orbit)} orbits / {len(report.fingerprint)} fingerprint / "
        f"{len(report.entropy)} entropy classes",
        fontsize=9,
    )
    _finish(fig, path)


def distribution_figure(report, path) -> None:
    """Maximising input distribution from Blahut-Arimoto, one bar per input."""
    probs = np.asarray(report.result.distribution.probs)
    n = report.n
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(np.arange(probs.size), probs, width=1.0, color="0.3")
    if n <= 5:
        ax.set_xticks(np.arange(probs.size))
        ax.set_xticklabels([format(v, f"0{n}b") for v in range(probs.size)], rotation=90, fontsize=7)
    else:
        ax.set_xlabel("input (lexicographic index)")
    ax.set_ylabel("P(X = x)")
    ax.set_title(
        f"{report.channel}({report.param}), n={n}: "
        f"I/n={report.result.mi_per_symbol:.6f} bits, gap={report.result.invariance_gap:.1e}",
        fontsize=9,
    )
    _finish(fig, path)


def sample_figure(rows, path) -> None:
    """Empirical against exact output probabilities with 3-sigma bars."""
    labels = [r["output"] for r in rows]
    exact = np.array([r["exact"] for r in rows])
    emp = np.array([r["empirical"] for r in rows])
    sigma = np.array([r["sigma"] for r in rows])
    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.errorbar(x, exact, yerr=3 * sigma, fmt="_", color="0.2", capsize=3, label="exact +/- 3 sigma")
    ax.plot(x, emp, "o", ms=4, label="empirical")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_ylabel("probability")
    ax.legend(frameon=False)
    _finish(fig, path)
