"""CDF comparison of two choice models along an adjacent-transposition order."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import MAX_ENUMERATION_N, SparseChoiceModel, sjt_permutations
from .errors import DimensionError, SizeLimitError


def cdf_compare(a: SparseChoiceModel, b: SparseChoiceModel) -> list[tuple[int, str, float, float]]:
    """Running CDFs of ``a`` and ``b`` over all N! permutations in SJT order.

    Successive permutations differ by one adjacent transposition, so nearby
    x positions are nearby rankings. Both models are normalized first.
    """
    if a.n != b.n:
        raise DimensionError(f"models over {a.n} and {b.n} items")
    if a.n > MAX_ENUMERATION_N:
        raise SizeLimitError(f"cdf comparison enumerates n! permutations; limit n <= {MAX_ENUMERATION_N}")
    a, b = a.normalized(), b.normalized()
    perms = list(sjt_permutations(a.n))
    ca = np.cumsum([a.probability(p) for p in perms])
    cb = np.cumsum([b.probability(p) for p in perms])
    return [(i + 1, p.to_string(), float(ca[i]), float(cb[i])) for i, p in enumerate(perms)]


def plot_cdf(rows, path, label_a: str = "model A", label_b: str = "model B", title: str | None = None):
    """Staircase plot of both CDF columns, written to ``path`` (format from suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.step(xs, [r[2] for r in rows], where="post", label=label_a, lw=1.6)
    ax.step(xs, [r[3] for r in rows], where="post", label=label_b, lw=1.2, ls="--")
    ax.set_xlabel("permutation (adjacent-transposition order)")
    ax.set_ylabel("cumulative probability")
    ax.set_xlim(1, max(xs))
    ax.set_ylim(0, 1.02)
    if len(rows) <= 24:
        ax.set_xticks(xs)
        ax.set_xticklabels([r[1] for r in rows], rotation=90, fontsize=7)
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
    return Path(path)
