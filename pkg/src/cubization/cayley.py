"""Dart-based multigraphs and Cayley graphs.

Edge ``e`` consists of the forward dart ``2e`` and the backward dart
``2e + 1``; the opposite of dart ``d`` is ``d ^ 1``. In a Cayley graph the
dart ``(v, s)`` runs from ``v`` to ``v*s`` and its opposite is
``(v*s, s^-1)``, so every vertex has degree ``|S|`` and an involution
generator produces a double edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .groups import FiniteGroup, GeneratorSet


@dataclass(eq=False)
class Multigraph:
    vertex_count: int
    ends: np.ndarray  # (E, 2): tail and head of each forward dart
    labels: tuple[str, ...]  # one label per dart

    @property
    def edge_count(self) -> int:
        return len(self.ends)

    @property
    def dart_count(self) -> int:
        return 2 * len(self.ends)

    def tail(self, d: int) -> int:
        return int(self.ends[d >> 1, d & 1])

    def head(self, d: int) -> int:
        return int(self.ends[d >> 1, 1 - (d & 1)])

    @staticmethod
    def opposite(d: int) -> int:
        return d ^ 1

    @cached_property
    def dart_tails(self) -> np.ndarray:
        return self.ends.reshape(-1)

    @cached_property
    def dart_heads(self) -> np.ndarray:
        return self.ends[:, ::-1].reshape(-1)

    @cached_property
    def out_darts(self) -> list[list[int]]:
        """Darts leaving each vertex, in exploration order."""
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for d, t in enumerate(self.dart_tails):
            out[int(t)].append(d)
        return out

    def degrees(self) -> np.ndarray:
        return np.bincount(self.dart_tails, minlength=self.vertex_count)

    def components(self, removed: Sequence[int] = ()) -> np.ndarray:
        """Component label per vertex, labels numbered by lowest vertex."""
        skip = set(removed)
        label = np.full(self.vertex_count, -1, dtype=np.int64)
        count = 0
        for start in range(self.vertex_count):
            if label[start] >= 0:
                continue
            label[start] = count
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for d in self.out_darts[v]:
                    if d >> 1 in skip:
                        continue
                    w = self.head(d)
                    if label[w] < 0:
                        label[w] = count
                        queue.append(w)
            count += 1
        return label

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or bool(self.components().max() == 0)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence[tuple[int, int]], labels: Sequence[str] | None = None) -> "Multigraph":
        """Generic multigraph; edge ``i`` is oriented ``u -> v`` as given."""
        ends = np.array(edges, dtype=np.int64).reshape(-1, 2)
        if ends.size and (ends.min() < 0 or ends.max() >= vertex_count):
            raise ValidationError("edge endpoint out of range")
        if labels is None:
            labels = ["e"] * len(ends)
        dart_labels = []
        for lab in labels:
            dart_labels += [lab, lab + "^-1"]
        return cls(vertex_count, ends, tuple(dart_labels))


@dataclass(eq=False)
class CayleyGraph(Multigraph):
    group: FiniteGroup = field(default=None)  # type: ignore[assignment]
    gens: GeneratorSet = field(default=None)  # type: ignore[assignment]
    dart_index: np.ndarray = field(default=None)  # type: ignore[assignment]  # (|G|, 2m) -> dart id

    def dart(self, v: int, symbol: str) -> int:
        return int(self.dart_index[v, self.gens.index(symbol)])

    def symbol_of(self, d: int) -> int:
        """Generator symbol index carried by dart ``d``."""
        return int(self._dart_symbol[d])

    @cached_property
    def _dart_symbol(self) -> np.ndarray:
        sym = np.empty(self.dart_count, dtype=np.int64)
        for j in range(self.dart_index.shape[1]):
            sym[self.dart_index[:, j]] = j
        return sym

    @cached_property
    def out_darts(self) -> list[list[int]]:
        return [list(map(int, row)) for row in self.dart_index]


def build_cayley(group: FiniteGroup, gens: GeneratorSet) -> CayleyGraph:
    """Cayley multigraph with edges indexed by their lexicographically smaller dart."""
    gens.validate(group)
    n, width = group.order, len(gens)
    dart_index = np.full((n, width), -1, dtype=np.int64)
    ends, labels = [], []
    for v in range(n):
        for j in range(width):
            if dart_index[v, j] >= 0:
                continue
            w = group.mul(v, gens.elements[j])
            e = len(ends)
            dart_index[v, j] = 2 * e
            dart_index[w, gens.partner[j]] = 2 * e + 1
            ends.append((v, w))
            labels += [gens.symbols[j], gens.symbols[gens.partner[j]]]
    return CayleyGraph(n, np.array(ends, dtype=np.int64).reshape(-1, 2), tuple(labels),
                       group=group, gens=gens, dart_index=dart_index)


@dataclass(eq=False)
class SpanningTree:
    parent_dart: np.ndarray  # dart from parent into v; -1 at the root
    order: list[int]  # vertices in discovery order, root first

    @cached_property
    def tree_edges(self) -> frozenset[int]:
        return frozenset(int(d) >> 1 for d in self.parent_dart if d >= 0)


def spanning_tree(graph: Multigraph) -> SpanningTree:
    """Breadth-first tree from vertex 0, darts explored in ``out_darts`` order."""
    parent = np.full(graph.vertex_count, -1, dtype=np.int64)
    seen = np.zeros(graph.vertex_count, dtype=bool)
    seen[0] = True
    order = [0]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in graph.out_darts[v]:
            w = graph.head(d)
            if not seen[w]:
                seen[w] = True
                parent[w] = d
                order.append(w)
                queue.append(w)
    if len(order) != graph.vertex_count:
        raise ValidationError("graph is disconnected")
    return SpanningTree(parent, order)


def cycle_rank(graph: Multigraph) -> int:
    components = int(graph.components().max()) + 1 if graph.vertex_count else 0
    return graph.edge_count - graph.vertex_count + components


def bridges(graph: Multigraph) -> list[int]:
    """Edges whose removal disconnects their component (iterative low-link).

    Parallel edges are handled by skipping only the tree edge itself when
    looking back, never every edge to the parent vertex.
    """
    n = graph.vertex_count
    disc = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    found = []
    clock = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(graph.out_darts[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for d in it:
                if via >= 0 and d >> 1 == via:
                    continue
                w = graph.head(d)
                if disc[w] < 0:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, d >> 1, iter(graph.out_darts[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] > disc[u]:
                    found.append(via)
    return sorted(found)


@dataclass(eq=False)
class GraphAutomorphism:
    vertex_perm: np.ndarray
    dart_perm: np.ndarray

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self`` after ``other``."""
        return GraphAutomorphism(self.vertex_perm[other.vertex_perm], self.dart_perm[other.dart_perm])

    def is_identity(self) -> bool:
        return bool(np.all(self.vertex_perm == np.arange(len(self.vertex_perm))))

    def check(self, graph: Multigraph, labelled: bool = True) -> bool:
        d = np.arange(graph.dart_count)
        ok = np.array_equal(self.dart_perm[d ^ 1], self.dart_perm ^ 1)
        ok = ok and np.array_equal(graph.dart_tails[self.dart_perm], self.vertex_perm[graph.dart_tails])
        if labelled:
            ok = ok and all(graph.labels[int(self.dart_perm[i])] == graph.labels[i] for i in d)
        return bool(ok)


def identity_automorphism(graph: Multigraph) -> GraphAutomorphism:
    return GraphAutomorphism(np.arange(graph.vertex_count), np.arange(graph.dart_count))


def left_mult(graph: CayleyGraph, g: int) -> GraphAutomorphism:
    """Left multiplication by ``g``: ``v -> g*v`` and ``(v, s) -> (g*v, s)``."""
    vp = np.asarray(graph.group.left_row(g), dtype=np.int64)
    dart_perm = np.empty(graph.dart_count, dtype=np.int64)
    dart_perm[graph.dart_index] = graph.dart_index[vp]
    return GraphAutomorphism(vp, dart_perm)


# Export -------------------------------------------------------------------

def graph_to_json(graph: Multigraph, vertex_labels: Sequence[str] | None = None) -> dict:
    out = {
        "vertices": graph.vertex_count,
        "edges": [{"u": int(u), "v": int(v), "sym": graph.labels[2 * e]} for e, (u, v) in enumerate(graph.ends)],
    }
    if vertex_labels is not None:
        out["labels"] = list(vertex_labels)
    return out


def graph_from_json(obj: dict) -> Multigraph:
    try:
        n = int(obj["vertices"])
        edges = [(int(e["u"]), int(e["v"])) for e in obj["edges"]]
        labels = [str(e.get("sym", "e")) for e in obj["edges"]]
    except (KeyError, TypeError, ValueError):
        raise ValidationError("graph JSON needs 'vertices' and 'edges' with 'u', 'v'") from None
    return Multigraph.from_edges(n, edges, labels)


def graph_to_dot(graph: Multigraph, name: str = "G", vertex_labels: Sequence[str] | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v in range(graph.vertex_count):
        label = vertex_labels[v] if vertex_labels is not None else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for e, (u, v) in enumerate(graph.ends):
        lines.append(f'  {u} -- {v} [label="{graph.labels[2 * e]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
