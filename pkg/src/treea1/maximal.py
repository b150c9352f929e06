"""Tree averages, the maximal operator, A1 constants and stopping families.

Everything here is exact rational arithmetic on step weights.  The fast paths
aggregate leaf sums bottom-up and sweep the tree top-down once; the brute
force variant re-derives every quantity straight from the definitions and
exists purely as an oracle for the fast paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .rationals import as_fraction
from .tree import ROOT, NodeId, check_node, leaves_under
from .weights import StepWeight


@lru_cache(maxsize=64)
def _level_sums(w: StepWeight) -> tuple[tuple[Fraction, ...], ...]:
    """Sums of leaf values under every node, indexed [level][index]."""
    k = w.shape.k
    levels = [w.leaf_values]
    current = w.leaf_values
    for _ in range(w.shape.m):
        current = tuple(
            sum(current[k * i + j] for j in range(k)) for i in range(len(current) // k)
        )
        levels.append(current)
    levels.reverse()
    return tuple(levels)


@lru_cache(maxsize=64)
def _level_averages(w: StepWeight) -> tuple[tuple[Fraction, ...], ...]:
    k, m = w.shape.k, w.shape.m
    sums = _level_sums(w)
    return tuple(
        tuple(s / k ** (m - level) for s in sums[level]) for level in range(m + 1)
    )


def average(w: StepWeight, node: NodeId) -> Fraction:
    """Mean of the weight over a node, straight from the definition."""
    node = check_node(w.shape, node)
    block = leaves_under(w.shape, node)
    return Fraction(sum(w.leaf_values[i] for i in block), len(block))


def maximal_function(w: StepWeight) -> tuple[Fraction, ...]:
    """Per-leaf maximum of node averages over the leaf's ancestor chain.

    One top-down sweep carrying the running maximum; every node is visited
    once, so the cost is linear in the number of nodes.
    """
    k, m = w.shape.k, w.shape.m
    avgs = _level_averages(w)
    running = list(avgs[0])
    for level in range(1, m + 1):
        running = [
            a if a > running[i // k] else running[i // k]
            for i, a in enumerate(avgs[level])
        ]
    return tuple(running)


def maximal_function_bruteforce(w: StepWeight) -> tuple[Fraction, ...]:
    """Definitional oracle: enumerate every (leaf, ancestor) pair explicitly.

    Node averages are recomputed by direct summation over each node's own
    leaf range; nothing is shared with the fast path.
    """
    k, m = w.shape.k, w.shape.m
    out = []
    for leaf in range(w.shape.leaf_count):
        best = w.leaf_values[leaf]
        level, index = m, leaf
        while level > 0:
            level -= 1
            index //= k
            width = k ** (m - level)
            block = range(index * width, (index + 1) * width)
            avg = Fraction(sum(w.leaf_values[i] for i in block), width)
            if avg > best:
                best = avg
        out.append(best)
    return tuple(out)


def a1_constant(w: StepWeight) -> Fraction:
    """Least C with maximal_function(w) <= C * w at every leaf.

    Equals the maximum over nodes of (node average) / (minimum leaf value
    under the node); for step weights the essential infimum on a node is that
    minimum.
    """
    mf = maximal_function(w)
    return max(m / v for m, v in zip(mf, w.leaf_values))


def superlevel_set(w: StepWeight, threshold) -> tuple[NodeId, ...]:
    """Maximal nodes whose average strictly exceeds the threshold.

    The returned nodes are pairwise disjoint and their union is exactly
    {maximal_function(w) > threshold}.  If the root already qualifies the
    answer is (root,); if no node qualifies, the empty tuple.
    """
    threshold = as_fraction(threshold)
    avgs = _level_averages(w)
    k, m = w.shape.k, w.shape.m
    out: list[NodeId] = []
    stack = [ROOT]
    while stack:
        node = stack.pop()
        if avgs[node.level][node.index] > threshold:
            out.append(node)
        elif node.level < m:
            base = node.index * k
            stack.extend(NodeId(node.level + 1, base + j) for j in range(k))
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class StoppingFamily:
    """Stopping-time decomposition of a weight.

    ``members`` are the nodes whose average strictly exceeds the average of
    every strict ancestor (the root is always a member).  ``assignment`` maps
    each leaf to the largest node on its chain achieving the maximal average;
    ``star`` links each non-root member to the smallest member strictly
    containing it; ``node_averages`` records each member's average.
    """

    members: tuple[NodeId, ...]
    star: Mapping[NodeId, NodeId]
    assignment: tuple[NodeId, ...]
    node_averages: Mapping[NodeId, Fraction]

    def parts(self) -> dict[NodeId, tuple[int, ...]]:
        """Leaf partition: member -> leaves whose assignment is that member."""
        groups: dict[NodeId, list[int]] = {}
        for leaf, node in enumerate(self.assignment):
            groups.setdefault(node, []).append(leaf)
        return {node: tuple(leaves) for node, leaves in groups.items()}


def stopping_family(w: StepWeight) -> StoppingFamily:
    """Compute members, star links and the leaf assignment.

    Members come from the strict-ancestor criterion; the assignment is built
    independently by tracking, top-down, the largest node achieving the
    running maximal average.  The two constructions coincide (a verified
    property), which is what makes the decomposition identity exact.
    """
    k, m = w.shape.k, w.shape.m
    avgs = _level_averages(w)

    members: list[NodeId] = [ROOT]
    running = list(avgs[0])
    achiever = [ROOT]
    for level in range(1, m + 1):
        new_running: list[Fraction] = []
        new_achiever: list[NodeId] = []
        for index, avg in enumerate(avgs[level]):
            p = index // k
            if avg > running[p]:
                members.append(NodeId(level, index))
                new_running.append(avg)
                new_achiever.append(NodeId(level, index))
            else:
                new_running.append(running[p])
                new_achiever.append(achiever[p])
        running = new_running
        achiever = new_achiever

    member_set = set(members)
    star: dict[NodeId, NodeId] = {}
    for node in members:
        if node == ROOT:
            continue
        level, index = node
        while level > 0:
            level -= 1
            index //= k
            if NodeId(level, index) in member_set:
                star[node] = NodeId(level, index)
                break

    node_averages = {node: avgs[node.level][node.index] for node in members}
    return StoppingFamily(
        members=tuple(sorted(members)),
        star=star,
        assignment=tuple(achiever),
        node_averages=node_averages,
    )
