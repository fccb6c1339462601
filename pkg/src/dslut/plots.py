"""Figure rendering for the report paths; every function writes a file."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_occurrence_figure(rows, path, title="Occurrence rates of top functions"):
    """Bar chart of per-class occurrence rates with the cumulative line."""
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(rows)), 3.2))
    xs = range(1, len(rows) + 1)
    ax.bar(xs, [r.rate * 100 for r in rows], color="#4878a8", label="occurrence rate")
    ax.set_xlabel("rank")
    ax.set_ylabel("occurrence rate (%)")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r.entry.tt.to_hex() for r in rows], rotation=90, fontsize=6)
    ax2 = ax.twinx()
    ax2.plot(list(xs), [r.cumulative * 100 for r in rows], "k.-", label="cumulative")
    ax2.set_ylabel("cumulative (%)")
    ax2.set_ylim(0, 105)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_coverage_figure(reports, path, title="Matched NPN classes per support size"):
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    xs = range(len(reports))
    ax.bar(xs, [r.total for r in reports], color="#cccccc", label="classes")
    ax.bar(xs, [r.matched for r in reports], color="#4878a8", label="matched")
    for i, r in enumerate(reports):
        ax.text(i, r.matched, "%d/%d" % (r.matched, r.total), ha="center", va="bottom", fontsize=7)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([str(r.nvars) for r in reports])
    ax.set_xlabel("support size")
    ax.set_ylabel("NPN classes")
    ax.legend(fontsize=7)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_mapping_figure(rows, path, title="Depth-oriented mapping"):
    """Per-netlist levels and cell counts from a mapping report."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.0))
    names = [r.name for r in rows]
    xs = range(len(rows))
    ax1.bar(xs, [r.max_level for r in rows], color="#4878a8")
    ax1.set_xticks(list(xs))
    ax1.set_xticklabels(names, rotation=45, ha="right", fontsize=6)
    ax1.set_ylabel("max level (cells)")
    ax2.bar(xs, [r.n_plb for r in rows], color="#a85448")
    ax2.set_xticks(list(xs))
    ax2.set_xticklabels(names, rotation=45, ha="right", fontsize=6)
    ax2.set_ylabel("cells")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
