"""droplet_graph.py

Trees attached to droplet components and the tree-counting inequality.

Features:
- Tree with valence counts and JSON form
- tree_inequality(): 2*n1 + n2 >= n + 3 for a tree with n edges
- enumerate_trees(): every labeled tree on up to 9 vertices via Pruefer codes
- check_all_trees(): the same exhaustive check, vectorized over code blocks
- extract_droplet_tree(): raster components of the closed droplet joined
  at double points

Usage:
    from droplet_graph import check_all_trees
    summary = check_all_trees(9)   # 5,063,361 trees, 0 violations
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy import ndimage

from config import ASSOCIATION_RADIUS_PX, MAX_TREE_VERTICES, MIN_COMPONENT_PIXELS
from core.dynamics import BAND, DROPLET, EscapeRaster
from core.errors import InvalidInput, NotATree
from core.singularity import Singularity
from utils.jsonio import point_to_json
from utils.logging import log

__all__ = [
    "Tree",
    "TreeInequality",
    "TreeCheckSummary",
    "DropletTree",
    "tree_inequality",
    "prufer_edges",
    "enumerate_trees",
    "check_all_trees",
    "extract_droplet_tree",
]


# =========================
# Trees
# =========================

def _is_spanning_tree(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    if len(edges) != n - 1:
        return False
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[rv] = ru
    return True


@dataclass(frozen=True)
class Tree:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_count < 1:
            raise InvalidInput(f"a tree needs at least one vertex, got {self.vertex_count}")
        if any(not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count) for u, v in edges):
            raise InvalidInput("edge endpoint out of range")
        if not _is_spanning_tree(self.vertex_count, edges):
            raise InvalidInput("edges do not form a spanning tree")

    def valences(self) -> list[int]:
        val = [0] * self.vertex_count
        for u, v in self.edges:
            val[u] += 1
            val[v] += 1
        return val

    @property
    def is_chain(self) -> bool:
        return self.vertex_count >= 2 and max(self.valences()) <= 2

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def chain(cls, n_vertices: int) -> "Tree":
        return cls(n_vertices, tuple((i, i + 1) for i in range(n_vertices - 1)))

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


@dataclass(frozen=True)
class TreeInequality:
    n: int
    n1: int
    n2: int
    lhs: int
    rhs: int
    ok: bool
    equality: bool


def tree_inequality(t: Tree) -> TreeInequality:
    n = len(t.edges)
    if n == 0:
        raise InvalidInput("tree inequality needs at least one edge")
    val = t.valences()
    n1, n2 = val.count(1), val.count(2)
    lhs, rhs = 2 * n1 + n2, n + 3
    return TreeInequality(n, n1, n2, lhs, rhs, lhs >= rhs, lhs == rhs)


def prufer_edges(seq: Sequence[int], n: int) -> tuple[tuple[int, int], ...]:
    """Decode a Pruefer sequence of length n-2 over range(n)."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(n) if degree[x] == 1)
    edges.append((u, w))
    return tuple(edges)


def _check_size(n_vertices: int) -> None:
    if not 2 <= n_vertices <= MAX_TREE_VERTICES:
        raise InvalidInput(f"tree size must be in 2..{MAX_TREE_VERTICES}, got {n_vertices}")


def enumerate_trees(n_vertices: int) -> Iterator[Tree]:
    """All n^(n-2) labeled trees, Pruefer codes in lexicographic order."""
    _check_size(n_vertices)
    for seq in itertools.product(range(n_vertices), repeat=n_vertices - 2):
        yield Tree(n_vertices, prufer_edges(seq, n_vertices))


# -------------------------
# Exhaustive check
# -------------------------

@dataclass
class TreeCheckSummary:
    max_vertices: int
    checked: int = 0
    violations: int = 0
    chains: int = 0
    chain_equalities: int = 0
    per_size: dict[int, dict[str, int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.chain_equalities == self.chains

    def to_json(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "checked": self.checked,
            "violations": self.violations,
            "chains": self.chains,
            "chain_equalities": self.chain_equalities,
            "ok": self.ok,
            "per_size": {str(k): v for k, v in sorted(self.per_size.items())},
        }


_BLOCK = 1 << 18


def check_all_trees(max_vertices: int = MAX_TREE_VERTICES) -> TreeCheckSummary:
    """Check the inequality on every labeled tree with 2..max_vertices vertices.

    A vertex's valence is one more than its count in the Pruefer code, so
    the valence histogram comes straight from the codes.
    """
    _check_size(max_vertices)
    summary = TreeCheckSummary(max_vertices)
    for n in range(2, max_vertices + 1):
        length = n - 2
        total = n ** length
        stats = {"trees": 0, "violations": 0, "equalities": 0, "chains": 0, "non_chain_equalities": 0}
        powers = n ** np.arange(length, dtype=np.int64)
        for lo in range(0, total, _BLOCK):
            idx = np.arange(lo, min(lo + _BLOCK, total), dtype=np.int64)
            digits = (idx[:, None] // powers[None, :]) % n
            counts = np.stack([np.sum(digits == v, axis=1) for v in range(n)], axis=1)
            valence = counts + 1
            n1 = np.sum(valence == 1, axis=1)
            n2 = np.sum(valence == 2, axis=1)
            lhs, rhs = 2 * n1 + n2, (n - 1) + 3
            chain = (n1 == 2) & (n2 == n - 2)
            equal = lhs == rhs
            stats["trees"] += int(idx.size)
            stats["violations"] += int(np.sum(lhs < rhs))
            stats["equalities"] += int(np.sum(equal))
            stats["chains"] += int(np.sum(chain))
            stats["non_chain_equalities"] += int(np.sum(equal & ~chain))
            summary.chain_equalities += int(np.sum(equal & chain))
        summary.per_size[n] = stats
        summary.checked += stats["trees"]
        summary.violations += stats["violations"]
        summary.chains += stats["chains"]
    log(f"[Trees] checked {summary.checked} labeled trees, {summary.violations} violations")
    return summary


# =========================
# Droplet trees
# =========================

@dataclass(frozen=True)
class DropletTree:
    tree: Tree
    vertex_regions: dict[int, int]
    edge_points: tuple[complex, ...]

    def to_json(self) -> dict:
        out = self.tree.to_json()
        out["edge_points"] = [point_to_json(p) for p in self.edge_points]
        out["vertex_regions"] = {str(k): v for k, v in sorted(self.vertex_regions.items())}
        return out


def extract_droplet_tree(
    raster: EscapeRaster,
    doubles: Sequence[Singularity],
    radius_px: float = ASSOCIATION_RADIUS_PX,
) -> DropletTree:
    """Vertices: components of the closed droplet with a small disk cut out
    around every double point. Each double point joins the two components
    its surrounding ring meets.

    Raises NotATree.
    """
    cells = raster.cells
    closed = (cells == DROPLET) | (cells == BAND)
    rows = np.arange(raster.ny)[:, None] + 0.5
    cols = np.arange(raster.nx)[None, :] + 0.5

    dists = []
    for s in doubles:
        pr = (raster.bounds.ymax - s.location.imag) / raster.dy
        pc = (s.location.real - raster.bounds.xmin) / raster.dx
        dists.append(np.hypot(rows - pr, cols - pc))

    cut = closed.copy()
    for d in dists:
        cut &= d > radius_px

    labels, count = ndimage.label(cut, structure=np.ones((3, 3), dtype=bool))
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    kept = [lab for lab in range(1, count + 1) if sizes[lab] >= MIN_COMPONENT_PIXELS]
    if not kept:
        raise NotATree("no droplet component in view")
    vertex_of = {lab: i for i, lab in enumerate(kept)}

    edges: list[tuple[int, int]] = []
    points: list[complex] = []
    for s, d in zip(doubles, dists):
        ring = (d > radius_px) & (d <= radius_px + 1.5)
        met = sorted({vertex_of[lab] for lab in np.unique(labels[ring]) if lab in vertex_of})
        if len(met) != 2:
            raise NotATree(f"double point {s.location:.6g} touches {len(met)} droplet components, expected 2")
        edges.append((met[0], met[1]))
        points.append(s.location)

    if not _is_spanning_tree(len(kept), edges):
        raise NotATree(f"{len(kept)} components and {len(edges)} double points do not form a tree")
    tree = Tree(len(kept), tuple(edges))
    return DropletTree(tree, {i: int(lab) for lab, i in vertex_of.items()}, tuple(points))
