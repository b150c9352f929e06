"""Finite trees of homogeneity k over a probability space.

A shape ``(k, m)`` splits the unit-mass space into ``k**m`` leaves of equal
measure; the node at level ``l`` with index ``i`` covers the contiguous leaf
block ``[i*k**(m-l), (i+1)*k**(m-l))``.  Nodes are addressed arithmetically,
so ancestry, measure and leaf ranges are plain integer arithmetic and no tree
object is ever allocated.  Points of the underlying space never materialize:
for step weights every pointwise quantity is constant on leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import ParameterError


class NodeId(NamedTuple):
    """Address of a tree node: ``level`` in [0, m], ``index`` in [0, k**level)."""

    level: int
    index: int


ROOT = NodeId(0, 0)


@dataclass(frozen=True)
class TreeShape:
    """Homogeneity ``k`` (branching factor) and depth ``m`` (leaf level)."""

    k: int
    m: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 2:
            raise ParameterError(f"homogeneity k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ParameterError(f"depth m must be an integer >= 1, got {self.m!r}")

    @property
    def leaf_count(self) -> int:
        return self.k**self.m

    def level_size(self, level: int) -> int:
        return self.k**level

    def node_count(self) -> int:
        return (self.k ** (self.m + 1) - 1) // (self.k - 1)


def make_shape(k: int, m: int) -> TreeShape:
    """Validated constructor for a tree shape."""
    return TreeShape(k, m)


def check_node(shape: TreeShape, node: NodeId) -> NodeId:
    """Validate a node address against a shape; returns the node unchanged."""
    level, index = node
    if not (0 <= level <= shape.m):
        raise ParameterError(f"node level {level} outside [0, {shape.m}]")
    if not (0 <= index < shape.level_size(level)):
        raise ParameterError(f"node index {index} outside [0, {shape.level_size(level)}) at level {level}")
    return NodeId(level, index)


def node_measure(shape: TreeShape, node: NodeId) -> Fraction:
    """Measure of a node: each level splits mass k ways, so k**(-level)."""
    node = check_node(shape, node)
    return Fraction(1, shape.k**node.level)


def parent(shape: TreeShape, node: NodeId) -> NodeId:
    node = check_node(shape, node)
    if node.level == 0:
        raise ParameterError("root has no parent")
    return NodeId(node.level - 1, node.index // shape.k)


def children(shape: TreeShape, node: NodeId) -> tuple[NodeId, ...]:
    node = check_node(shape, node)
    if node.level == shape.m:
        return ()
    base = node.index * shape.k
    return tuple(NodeId(node.level + 1, base + j) for j in range(shape.k))


def ancestors(shape: TreeShape, node: NodeId) -> tuple[NodeId, ...]:
    """Chain from the node itself up to the root, innermost first."""
    check_node(shape, node)
    chain = [NodeId(*node)]
    level, index = node
    while level > 0:
        level -= 1
        index //= shape.k
        chain.append(NodeId(level, index))
    return tuple(chain)


def leaves_under(shape: TreeShape, node: NodeId) -> range:
    """Contiguous range of leaf indices descending from the node."""
    node = check_node(shape, node)
    width = shape.k ** (shape.m - node.level)
    return range(node.index * width, (node.index + 1) * width)


def is_leaf(shape: TreeShape, node: NodeId) -> bool:
    return check_node(shape, node).level == shape.m


def all_nodes(shape: TreeShape) -> Iterator[NodeId]:
    """Every node in level order (root first)."""
    for level in range(shape.m + 1):
        for index in range(shape.level_size(level)):
            yield NodeId(level, index)
