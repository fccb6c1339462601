"""MUX trees for bit assignments: construction, pruning, transistor accounting.

A node is (select level, child0, child1); child references are node ids
(>= 0) or encoded SRAM leaves (ref < 0 means bit id -ref-1).  Input i
drives the level-i selects, with input 0 nearest the leaves.  Each
surviving 2:1 pass-gate MUX costs 2 transistors; buffers are modeled
elsewhere.

Two rewrites prune the full tree to fixpoint: a MUX whose children are
the same reference collapses to that child (identical inputs), and nodes
with equal (level, child0, child1) merge (structural hashing).  The
surviving node count is order-invariant; the split between the two
counters can depend on rewrite order.
"""

from dataclasses import dataclass

from .errors import UsageError


def leaf_ref(bit_id):
    return -bit_id - 1


def is_leaf(ref):
    return ref < 0


def leaf_bit(ref):
    return -ref - 1


@dataclass
class MuxTree:
    k: int
    n_bits: int
    nodes: dict          # id -> (level, child0, child1)
    root: int
    pruned_identical: int = 0
    pruned_strash: int = 0

    @property
    def transistors(self):
        return 2 * len(self.nodes)


def build_full(ba):
    """Complete 2^k-leaf tree labeled by the assignment; 2^k - 1 MUX nodes."""
    nodes = {}
    refs = [leaf_ref(b) for b in ba.assign]
    next_id = 0
    level = 0
    while len(refs) > 1:
        merged = []
        for i in range(0, len(refs), 2):
            nodes[next_id] = (level, refs[i], refs[i + 1])
            merged.append(next_id)
            next_id += 1
        refs = merged
        level += 1
    return MuxTree(k=ba.k, n_bits=ba.b, nodes=nodes, root=refs[0])


def prune(tree, rng=None):
    """Apply both rewrites to fixpoint, in place; returns the tree.

    With `rng` the applicable rewrite is chosen at random each step
    (used to check confluence); otherwise the first in a fixed scan
    order is applied.
    """
    nodes = tree.nodes
    while True:
        rewrites = []
        for nid in sorted(nodes):
            level, c0, c1 = nodes[nid]
            if c0 == c1:
                rewrites.append(("identical", nid, c0))
        seen = {}
        for nid in sorted(nodes):
            key = nodes[nid]
            if key in seen:
                rewrites.append(("strash", nid, seen[key]))
            else:
                seen[key] = nid
        if not rewrites:
            return tree
        kind, nid, target = rng.choice(rewrites) if rng else rewrites[0]
        # redirect every reference to nid, then drop it
        for other, (lvl, c0, c1) in list(nodes.items()):
            if other == nid:
                continue
            if c0 == nid or c1 == nid:
                nodes[other] = (lvl, target if c0 == nid else c0, target if c1 == nid else c1)
        if tree.root == nid:
            tree.root = target
        del nodes[nid]
        if kind == "identical":
            tree.pruned_identical += 1
        else:
            tree.pruned_strash += 1


def build_and_prune(ba, rng=None):
    return prune(build_full(ba), rng=rng)


def tree_eval(tree, sram, minterm):
    """Evaluate the (possibly pruned) tree: inputs are the select lines."""
    if len(sram) != tree.n_bits:
        raise UsageError("sram vector length %d != %d bits" % (len(sram), tree.n_bits))
    ref = tree.root
    while not is_leaf(ref):
        level, c0, c1 = tree.nodes[ref]
        ref = c1 if (minterm >> level) & 1 else c0
    return int(sram[leaf_bit(ref)])


def path_stages(tree):
    """Surviving MUX stages seen from each input to the output.

    stages[i] is the largest number of surviving MUXes on any root path
    through a surviving level-i node (0 when input i drives nothing).
    """
    stages = [0] * tree.k
    if is_leaf(tree.root):
        return stages
    depth = {tree.root: 1}
    # children sit at strictly lower levels, so process by descending level
    for nid in sorted(tree.nodes, key=lambda n: -tree.nodes[n][0]):
        if nid not in depth:
            continue  # unreachable from the root
        level, c0, c1 = tree.nodes[nid]
        stages[level] = max(stages[level], depth[nid])
        for child in (c0, c1):
            if not is_leaf(child):
                depth[child] = max(depth.get(child, 0), depth[nid] + 1)
    return stages


def transistor_report(tree):
    """Surviving and pruned transistor counts; the three sum to 2*(2^k - 1)."""
    return {
        "transistors": tree.transistors,
        "pruned_identical": 2 * tree.pruned_identical,
        "pruned_strash": 2 * tree.pruned_strash,
    }


def to_dot(tree):
    """Graphviz description of the pruned DAG."""
    lines = ["digraph muxtree {", "  rankdir=BT;"]
    leaves = set()

    def ref_name(ref):
        if is_leaf(ref):
            leaves.add(leaf_bit(ref))
            return "b%d" % leaf_bit(ref)
        return "n%d" % ref

    for nid, (level, c0, c1) in sorted(tree.nodes.items()):
        lines.append('  n%d [label="MUX x%d" shape=invtrapezium];' % (nid, level))
        lines.append("  %s -> n%d [label=0];" % (ref_name(c0), nid))
        lines.append("  %s -> n%d [label=1];" % (ref_name(c1), nid))
    root = ref_name(tree.root)
    for bit in sorted(leaves):
        lines.append('  b%d [label="B%d" shape=box];' % (bit, bit))
    lines.append('  out [label="out" shape=plaintext];')
    lines.append("  %s -> out;" % root)
    lines.append("}")
    return "\n".join(lines) + "\n"
