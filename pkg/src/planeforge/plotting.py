"""Report figures. Everything renders off-screen (Agg) straight to files."""

import itertools
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spectra import incidence_matrix, tanner_lower_bound  # noqa: E402

PART_COLORS = ["tab:blue", "tab:orange", "tab:green"]


def _style(ax):
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.grid(True, alpha=0.2, linestyle="-")


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_incidence(pl, path):
    m = incidence_matrix(pl).entries
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.imshow(m, cmap="Greys", interpolation="nearest")
    ax.set_xlabel("line id")
    ax.set_ylabel("point id")
    ax.set_title(f"PG(2,{pl.q}) incidence, n={pl.n}")
    return _save(fig, path)


def plot_expansion(summary, path):
    """Worst missed-line count per |A| against the two upper bounds."""
    n, q = summary.n, summary.q
    sizes = sorted(summary.max_missed_by_size)
    worst = [summary.max_missed_by_size[a] for a in sizes]
    grid = np.arange(1, n + 1)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid, n ** 1.5 / grid, "-", color="tab:red", label=r"$n^{3/2}/|A|$")
    ax.plot(grid, [n - float(tanner_lower_bound(q, n, int(a))) for a in grid], "--",
            color="tab:purple", label="n - Tanner bound")
    ax.plot(sizes, worst, "o", color="tab:blue", label=f"observed max ({summary.mode})")
    ax.set_xlabel("|A|")
    ax.set_ylabel("lines missing A")
    ax.set_ylim(0, min(n, max(worst + [1]) * 2.5))
    ax.set_title(f"q={q}: {summary.subsets_checked} subsets, {len(summary.violations)} violations")
    ax.legend(frameon=False)
    _style(ax)
    return _save(fig, path)


def plot_collapse(trace, total_faces, path, title="collapse replay"):
    remaining = [total_faces]
    for removed in trace:
        remaining.append(remaining[-1] - removed)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.step(range(len(remaining)), remaining, where="post", color="tab:blue")
    ax.set_xlabel("step")
    ax.set_ylabel("faces remaining")
    ax.set_title(title)
    _style(ax)
    return _save(fig, path)


def _hull_order(pts):
    """Vertices of the 2D convex hull in counter-clockwise order (floats, for drawing)."""
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def plot_selection(points, result, path):
    """Points coloured by part, the centre a, and all transversal triangles."""
    pos = {i: tuple(float(c) for c in p) for i, p in points.items()}
    a = tuple(float(c) for c in result.a)
    fig, ax = plt.subplots(figsize=(5, 5))
    if len(result.parts) == 3:
        for tri in itertools.product(*result.parts):
            xs = [pos[i][0] for i in tri] + [pos[tri[0]][0]]
            ys = [pos[i][1] for i in tri] + [pos[tri[0]][1]]
            ax.plot(xs, ys, "-", color="grey", alpha=0.08, lw=0.8)
    for k, part in enumerate(result.parts):
        xs = [pos[i][0] for i in part]
        ys = [pos[i][1] if len(pos[i]) > 1 else 0.0 for i in part]
        ax.scatter(xs, ys, color=PART_COLORS[k % 3], label=f"Z{k + 1}", zorder=3)
    ax.scatter([a[0]], [a[1] if len(a) > 1 else 0.0], marker="*", s=160, color="tab:red",
               label="a", zorder=4)
    ax.set_title(f"hit fraction {result.hit_fraction} ({result.hits}/{result.transversals})")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(frameon=False)
    _style(ax)
    return _save(fig, path)


def plot_representation(rep, path, highlight=None):
    """Draw a planar representation; ``highlight`` is an optional witness point."""
    if rep.d != 2:
        raise ValueError("only planar representations can be drawn")
    cmap = plt.get_cmap("tab10")
    fig, ax = plt.subplots(figsize=(5, 5))
    for k, (lid, poly) in enumerate(sorted(rep.sets.items())):
        hull = _hull_order([(float(x), float(y)) for x, y in poly.vertices])
        color = cmap(k % 10)
        if len(hull) >= 3:
            ax.fill(*zip(*hull), alpha=0.15, color=color)
            ax.plot(*zip(*(hull + hull[:1])), color=color, lw=1, label=f"C{lid}")
        else:
            ax.plot(*zip(*hull), "o-", color=color, lw=1, label=f"C{lid}")
    if highlight is not None:
        ax.scatter([float(highlight[0])], [float(highlight[1])], marker="*", s=160,
                   color="black", zorder=5, label="witness")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(frameon=False, fontsize=7, ncol=math.ceil(len(rep.sets) / 8))
    _style(ax)
    return _save(fig, path)
