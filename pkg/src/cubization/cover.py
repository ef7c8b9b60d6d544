"""The Z_k-homology cover of a graph, lifts of automorphisms and the cubization group.

The cover is described by voltages: fix a spanning tree, give the ``i``-th
non-tree edge (canonical edge order) the voltage ``+e_i`` on its forward
dart and ``-e_i`` on its backward dart, and zero on tree darts. Cover
vertices are pairs ``(v, x)`` with ``x`` in ``Z_k^I``; the lifted dart over
``d`` runs from ``(tail(d), x)`` to ``(head(d), x + voltage(d))``.

Every lift of a base automorphism ``g`` has the normal form

    (v, x) -> (g v, a + c(v) + M x)

where ``c(v)`` is the voltage of the ``g``-image of the tree path to ``v``
and column ``i`` of ``M`` is the voltage of the ``g``-image of the ``i``-th
fundamental cycle. This works without materializing the cover.

A materialized cover numbers vertex ``(v, x)`` as ``v * k**I + code(x)``
with ``code(x) = sum(x[i] * k**i)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cayley import (
    CayleyGraph,
    GraphAutomorphism,
    Multigraph,
    SpanningTree,
    cycle_rank,
    graph_to_json,
    identity_automorphism,
    left_mult,
    spanning_tree,
)
from .errors import PreconditionError, SizeLimitError, StructuralError, ValidationError
from .groups import DEFAULT_CLOSURE_CAP, PermutationGroup, evaluate_word, exponent, group_from_permutations

DEFAULT_COVER_CAP = 10**5


@dataclass(eq=False)
class VoltageData:
    graph: Multigraph
    tree: SpanningTree
    k: int
    rank: int
    cycle_of_edge: np.ndarray  # basis index of each non-tree edge, -1 on tree edges
    cycle_edges: np.ndarray  # inverse map: basis index -> edge

    def voltage(self, d: int) -> tuple[int, int] | None:
        """``(basis index, sign)`` carried by dart ``d``, or ``None`` if zero."""
        i = int(self.cycle_of_edge[d >> 1])
        if i < 0:
            return None
        return i, (-1 if d & 1 else 1)

    def vector(self, d: int) -> np.ndarray:
        out = np.zeros(self.rank, dtype=np.int64)
        hit = self.voltage(d)
        if hit is not None:
            out[hit[0]] = hit[1] % self.k
        return out

    @cached_property
    def dart_vectors(self) -> np.ndarray:
        """Voltage of every dart, shape ``(2E, I)``, entries reduced mod k."""
        out = np.zeros((self.graph.dart_count, self.rank), dtype=np.int64)
        i = np.arange(self.rank)
        out[2 * self.cycle_edges, i] = 1
        out[2 * self.cycle_edges + 1, i] = self.k - 1
        return out

    def path_voltage(self, darts: Sequence[int]) -> np.ndarray:
        return self.dart_vectors[list(darts)].sum(axis=0) % self.k if len(darts) else np.zeros(self.rank, dtype=np.int64)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "rank": self.rank,
            "cycle_edges": self.cycle_edges.tolist(),
            "tree_parent_darts": self.tree.parent_dart.tolist(),
        }


def assign_voltages(graph: Multigraph, tree: SpanningTree, k: int) -> VoltageData:
    if k < 2:
        raise ValidationError("k must be at least 2")
    cycle_of_edge = np.full(graph.edge_count, -1, dtype=np.int64)
    cycle_edges = [e for e in range(graph.edge_count) if e not in tree.tree_edges]
    cycle_of_edge[cycle_edges] = np.arange(len(cycle_edges))
    rank = len(cycle_edges)
    if rank != cycle_rank(graph):
        raise StructuralError("non-tree edge count differs from cycle rank")
    return VoltageData(graph, tree, k, rank, cycle_of_edge, np.array(cycle_edges, dtype=np.int64))


def voltages_for(graph: Multigraph, k: int) -> VoltageData:
    return assign_voltages(graph, spanning_tree(graph), k)


# Materialized cover -------------------------------------------------------

@dataclass(eq=False)
class CoverGraph:
    voltages: VoltageData
    fiber: int  # k ** I
    lift_target: np.ndarray  # (2E, fiber): phase code reached by the lifted dart

    @property
    def graph(self) -> Multigraph:
        return self.voltages.graph

    @property
    def k(self) -> int:
        return self.voltages.k

    @property
    def rank(self) -> int:
        return self.voltages.rank

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count * self.fiber

    @property
    def basepoint(self) -> int:
        return 0

    @cached_property
    def powers(self) -> np.ndarray:
        return self.k ** np.arange(self.rank, dtype=np.int64)

    @cached_property
    def phases(self) -> np.ndarray:
        """Digit matrix of every phase code, shape ``(fiber, I)``."""
        codes = np.arange(self.fiber, dtype=np.int64)
        return (codes[:, None] // self.powers[None, :]) % self.k

    def vertex_id(self, base: int, phase: Sequence[int]) -> int:
        return base * self.fiber + int(np.dot(np.asarray(phase, dtype=np.int64) % self.k, self.powers))

    def vertex(self, vid: int) -> tuple[int, tuple[int, ...]]:
        base, code = divmod(int(vid), self.fiber)
        return base, tuple(int(x) for x in self.phases[code])

    def project(self, vids) -> np.ndarray:
        return np.asarray(vids) // self.fiber

    def dart_target(self, vid: int, d: int) -> int:
        code = vid % self.fiber
        return self.graph.head(d) * self.fiber + int(self.lift_target[d, code])

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(src, dst, base_edge)`` of every cover edge; edge ``e*fiber + code``."""
        g = self.graph
        codes = np.arange(self.fiber, dtype=np.int64)
        src = (g.ends[:, 0, None] * self.fiber + codes[None, :]).reshape(-1)
        dst = (g.ends[:, 1, None] * self.fiber + self.lift_target[0::2]).reshape(-1)
        base = np.repeat(np.arange(g.edge_count), self.fiber)
        return src, dst, base

    def degrees(self) -> np.ndarray:
        src, dst, _ = self.edge_arrays
        return np.bincount(np.concatenate([src, dst]), minlength=self.vertex_count)

    def components(self, without_base_edge: int | None = None) -> tuple[int, np.ndarray]:
        src, dst, base = self.edge_arrays
        if without_base_edge is not None:
            keep = base != without_base_edge
            src, dst = src[keep], dst[keep]
        n = self.vertex_count
        adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
        return connected_components(adj, directed=False)

    @cached_property
    def adjacency_lists(self) -> tuple[list[list[int]], list[int], list[list[int]]]:
        """Plain-list copies of ``lift_target``, dart heads and out-darts for tight loops."""
        return self.lift_target.tolist(), self.graph.dart_heads.tolist(), self.graph.out_darts

    def neighbors(self, vid: int) -> list[int]:
        v = vid // self.fiber
        return [self.dart_target(vid, d) for d in self.graph.out_darts[v]]

    def to_multigraph(self) -> Multigraph:
        src, dst, base = self.edge_arrays
        labels = []
        for e in base:
            labels += [self.graph.labels[2 * e], self.graph.labels[2 * e + 1]]
        return Multigraph(self.vertex_count, np.stack([src, dst], axis=1), tuple(labels))

    def vertex_labels(self) -> list[str]:
        digits = ["".join(str(int(x)) for x in row) for row in self.phases]
        return [f"{v}:{digits[c]}" for v in range(self.graph.vertex_count) for c in range(self.fiber)]

    def to_json(self) -> dict:
        return graph_to_json(self.to_multigraph(), self.vertex_labels())


def build_cover(voltages: VoltageData, cap: int = DEFAULT_COVER_CAP) -> CoverGraph:
    g, k, rank = voltages.graph, voltages.k, voltages.rank
    size = g.vertex_count * k**rank
    if size > cap:
        raise SizeLimitError(f"cover has {size} vertices, above cap {cap}; use the implicit regime")
    fiber = k**rank
    codes = np.arange(fiber, dtype=np.int64)
    lift_target = np.tile(codes, (g.dart_count, 1))
    for d in range(g.dart_count):
        hit = voltages.voltage(d)
        if hit is None:
            continue
        i, sign = hit
        digit = (codes // k**i) % k
        lift_target[d] = codes + (((digit + sign) % k) - digit) * k**i
    return CoverGraph(voltages, fiber, lift_target)


# Lifts --------------------------------------------------------------------

@dataclass(eq=False)
class Lift:
    """Cover automorphism ``(v, x) -> (aut(v), a + c[v] + M x)``."""

    voltages: VoltageData
    aut: GraphAutomorphism
    a: np.ndarray  # (I,)
    M: np.ndarray  # (I, I)
    c: np.ndarray  # (V, I), c[0] == 0
    perm: np.ndarray | None = field(default=None)  # set when computed by propagation

    @property
    def k(self) -> int:
        return self.voltages.k

    @property
    def g(self) -> int:
        """Base group element, for lifts of left multiplications."""
        return int(self.aut.vertex_perm[0])

    def apply(self, vertex: tuple[int, Sequence[int]]) -> tuple[int, tuple[int, ...]]:
        v, x = vertex
        y = (self.a + self.c[v] + self.M @ np.asarray(x, dtype=np.int64)) % self.k
        return int(self.aut.vertex_perm[v]), tuple(int(t) for t in y)

    def compose(self, other: "Lift") -> "Lift":
        """``self`` after ``other``."""
        k = self.k
        vp2 = other.aut.vertex_perm
        a = (self.a + self.c[vp2[0]] + self.M @ other.a) % k
        c = (self.a[None, :] + self.c[vp2] + (other.a[None, :] + other.c) @ self.M.T - a[None, :]) % k
        return Lift(self.voltages, self.aut.compose(other.aut), a, (self.M @ other.M) % k, c)

    def power(self, n: int) -> "Lift":
        result = identity_lift(self.voltages)
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            base = base.compose(base)
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return bool(
            self.aut.is_identity()
            and not self.a.any()
            and not self.c.any()
            and np.array_equal(self.M, np.eye(self.voltages.rank, dtype=np.int64))
        )

    def is_deck(self) -> bool:
        return self.aut.is_identity()

    def fixes(self, probes: Sequence[tuple[int, tuple[int, ...]]]) -> bool:
        return all(self.apply(p) == (p[0], tuple(int(t) % self.k for t in p[1])) for p in probes)

    def permutation(self, cover: CoverGraph) -> np.ndarray:
        """Action on materialized cover vertex ids."""
        if self.perm is not None:
            return self.perm
        return self.affine_permutation(cover)

    def affine_permutation(self, cover: CoverGraph) -> np.ndarray:
        n_base, fiber = cover.graph.vertex_count, cover.fiber
        new_phase = (self.a[None, None, :] + self.c[:, None, :] + (cover.phases @ self.M.T)[None, :, :]) % self.k
        codes = new_phase @ cover.powers
        return (self.aut.vertex_perm[:, None] * fiber + codes).reshape(n_base * fiber)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "a": self.a.tolist(),
            "M": self.M.tolist(),
            "c": {str(v): row.tolist() for v, row in enumerate(self.c)},
        }


def identity_lift(voltages: VoltageData) -> Lift:
    n, r = voltages.graph.vertex_count, voltages.rank
    return Lift(voltages, identity_automorphism(voltages.graph), np.zeros(r, dtype=np.int64),
                np.eye(r, dtype=np.int64), np.zeros((n, r), dtype=np.int64))


def deck_transformation(voltages: VoltageData, t: Sequence[int]) -> Lift:
    lift = identity_lift(voltages)
    lift.a = np.asarray(t, dtype=np.int64) % voltages.k
    return lift


def lift_formula(voltages: VoltageData, aut: GraphAutomorphism | int, a: Sequence[int] | None = None) -> Lift:
    """Closed-form lift of ``aut`` sending the basepoint to ``(aut(1), a)``.

    ``aut`` may be a group element of a Cayley graph, meaning left
    multiplication by it.
    """
    graph, tree, k = voltages.graph, voltages.tree, voltages.k
    if not isinstance(aut, GraphAutomorphism):
        aut = left_mult(graph, int(aut))  # type: ignore[arg-type]
    dv = voltages.dart_vectors[aut.dart_perm]  # voltage of the image of each dart
    c = np.zeros((graph.vertex_count, voltages.rank), dtype=np.int64)
    for v in tree.order[1:]:
        d = int(tree.parent_dart[v])
        c[v] = (c[graph.tail(d)] + dv[d]) % k
    fwd = 2 * voltages.cycle_edges
    M = ((c[graph.dart_tails[fwd]] + dv[fwd] - c[graph.dart_heads[fwd]]) % k).T.copy()
    offset = np.zeros(voltages.rank, dtype=np.int64) if a is None else np.asarray(a, dtype=np.int64) % k
    return Lift(voltages, aut, offset, M, c)


def lift_bfs(cover: CoverGraph, aut: GraphAutomorphism, image: tuple[int, Sequence[int]] | int) -> Lift:
    """Lift of ``aut`` sending the basepoint to ``image``, by propagation along darts."""
    graph, fiber = cover.graph, cover.fiber
    target = image if isinstance(image, (int, np.integer)) else cover.vertex_id(*image)
    if target // fiber != aut.vertex_perm[0]:
        raise PreconditionError("image of the basepoint must lie over aut(1)")
    targets, heads, out = cover.adjacency_lists
    dart_perm = aut.dart_perm.tolist()
    image = [-1] * cover.vertex_count
    image[0] = int(target)
    queue = deque([0])
    while queue:
        x = queue.popleft()
        y = image[x]
        xb, xc = divmod(x, fiber)
        yc = y % fiber
        for d in out[xb]:
            x2 = heads[d] * fiber + targets[d][xc]
            d2 = dart_perm[d]
            y2 = heads[d2] * fiber + targets[d2][yc]
            if image[x2] < 0:
                image[x2] = y2
                queue.append(x2)
            elif image[x2] != y2:
                raise StructuralError(f"lift propagation is inconsistent at cover vertex {x2}")
    perm = np.array(image, dtype=np.int64)
    if (perm < 0).any() or len(np.unique(perm)) != cover.vertex_count:
        raise StructuralError("propagated lift is not a bijection")
    phase = cover.phases[perm % fiber]
    a = phase[0]
    c = (phase[np.arange(graph.vertex_count) * fiber] - a[None, :]) % cover.k
    M = ((phase[cover.powers] - a[None, :]) % cover.k).T.copy() if cover.rank else np.zeros((0, 0), dtype=np.int64)
    return Lift(cover.voltages, aut, a.copy(), M, c, perm=perm)


# Cubization ---------------------------------------------------------------

def cubization_generators(voltages: VoltageData) -> list[Lift]:
    """One lift per symbol ``s``, sending the basepoint along the lifted dart ``(1, s)``."""
    graph = voltages.graph
    if not isinstance(graph, CayleyGraph):
        raise ValidationError("cubization generators need a Cayley graph")
    out = []
    for j, g in enumerate(graph.gens.elements):
        d = int(graph.dart_index[0, j])
        out.append(lift_formula(voltages, g, voltages.dart_vectors[d]))
    return out


def generator_lift_choices(voltages: VoltageData, symbol: str) -> list[tuple[int, ...]]:
    """Every offset making the lift of ``symbol`` land next to the basepoint.

    With a double edge there are two; :func:`cubization_generators` uses the
    one along the dart labelled ``symbol``.
    """
    graph = voltages.graph
    g = graph.gens.to_element(symbol)  # type: ignore[union-attr]
    return sorted({tuple(int(t) for t in voltages.dart_vectors[d]) for d in graph.out_darts[0] if graph.head(d) == g})


def cubization_order(graph: Multigraph, k: int) -> int:
    return graph.vertex_count * k ** cycle_rank(graph)


def cubization_group_explicit(cover: CoverGraph, lifts: Sequence[Lift], cap: int = DEFAULT_CLOSURE_CAP) -> PermutationGroup:
    perms = [lift.permutation(cover) for lift in lifts]
    return group_from_permutations(perms, degree=cover.vertex_count, cap=cap)


@dataclass
class SabidussiReport:
    free: bool
    transitive: bool
    group_order: int
    vertex_count: int
    method: str
    witness: int | None = None  # offending group element on failure

    @property
    def passed(self) -> bool:
        return self.free and self.transitive and self.group_order == self.vertex_count

    def to_json(self) -> dict:
        return {
            "free": self.free,
            "transitive": self.transitive,
            "group_order": self.group_order,
            "vertex_count": self.vertex_count,
            "method": self.method,
            "witness": self.witness,
            "passed": self.passed,
        }


def verify_sabidussi(cover: CoverGraph, group: PermutationGroup) -> SabidussiReport:
    """Check that ``group`` acts freely and transitively on the cover vertices."""
    perms = group.perms
    fixes = (perms == np.arange(cover.vertex_count)[None, :]).any(axis=1)
    fixes[0] = False
    witness = int(np.argmax(fixes)) if fixes.any() else None
    orbit = np.unique(perms[:, cover.basepoint])
    return SabidussiReport(witness is None, len(orbit) == cover.vertex_count, group.order,
                           cover.vertex_count, "permutations", witness)


def verify_sabidussi_normal_form(voltages: VoltageData, cap: int = DEFAULT_CLOSURE_CAP) -> SabidussiReport:
    """Same audit without storing permutations of the cover.

    Elements of the generated group are closed up as pairs ``(g, a)``; a lift
    of left multiplication by ``g`` is determined by its offset ``a``. A lift
    with ``g != 1`` has no fixed point because left multiplication is free on
    the base; a lift with ``g == 1`` is checked to be a pure translation.
    """
    graph, k = voltages.graph, voltages.k
    group = graph.group  # type: ignore[attr-defined]
    n = graph.vertex_count
    basic = [lift_formula(voltages, g) for g in range(n)]
    gens = cubization_generators(voltages)
    # right multiplication by generator j: (g, a) -> (g s, a + c_g[s] + M_g a_s)
    steps = [[(group.mul(g, s.g), (basic[g].c[s.g] + basic[g].M @ s.a) % k) for s in gens] for g in range(n)]
    start = (0, np.zeros(voltages.rank, dtype=np.int64))
    seen = {(0, start[1].tobytes())}
    queue = deque([start])
    while queue:
        g, a = queue.popleft()
        for h, shift in steps[g]:
            b = (a + shift) % k
            key = (h, b.tobytes())
            if key not in seen:
                if len(seen) >= cap:
                    raise SizeLimitError("normal-form closure exceeds cap")
                seen.add(key)
                queue.append((h, b))
    base_free = all(not np.any(group.left_row(g) == np.arange(n)) for g in range(1, n))
    deck_ok = not basic[0].c.any() and np.array_equal(basic[0].M, np.eye(voltages.rank, dtype=np.int64))
    order = len(seen)
    return SabidussiReport(base_free and deck_ok, order == n * k**voltages.rank, order,
                           n * k**voltages.rank, "normal-form")


# Probes and words ---------------------------------------------------------

def probe_vertices(voltages: VoltageData) -> list[tuple[int, tuple[int, ...]]]:
    """The basepoint and all its neighbours."""
    zero = (0,) * voltages.rank
    probes = [(0, zero)]
    for d in voltages.graph.out_darts[0]:
        probes.append((voltages.graph.head(d), tuple(int(t) for t in voltages.dart_vectors[d])))
    return probes


def word_lift(generator_lifts: Sequence[Lift], gens, word: Sequence[str]) -> Lift:
    """Product ``s_1~ ... s_l~`` (composition, rightmost applied first)."""
    result = identity_lift(generator_lifts[0].voltages)
    for s in word:
        result = result.compose(generator_lifts[gens.index(s)])
    return result


def tree_word(voltages: VoltageData, v: int) -> tuple[str, ...]:
    """Symbols along the tree path from the identity to ``v`` in a Cayley graph."""
    graph, tree = voltages.graph, voltages.tree
    word = []
    while v != 0:
        d = int(tree.parent_dart[v])
        word.append(graph.gens.symbols[graph.symbol_of(d)])  # type: ignore[union-attr]
        v = graph.tail(d)
    return tuple(reversed(word))


def trivial_product_power_is_identity(lifts: Sequence[Lift], k: int, cover: CoverGraph | None = None) -> bool:
    """Whether ``(l_1 ... l_n)^k`` is the identity, given the base product is trivial.

    With a materialized cover the full permutation is compared; otherwise the
    composite is tested at the basepoint and its neighbours.
    """
    if not lifts:
        return True
    product = lifts[0]
    for lift in lifts[1:]:
        product = product.compose(lift)
    if not product.aut.is_identity():
        raise PreconditionError("base product is not the identity")
    powered = product.power(k)
    if cover is not None:
        return bool(np.array_equal(powered.permutation(cover), np.arange(cover.vertex_count)))
    return powered.fixes(probe_vertices(lifts[0].voltages))


def lift_order(lift: Lift, limit: int) -> int | None:
    """Order of ``lift`` if at most ``limit``."""
    x = lift
    for d in range(1, limit + 1):
        if x.is_identity():
            return d
        x = x.compose(lift)
    return None


@dataclass
class ExponentReport:
    k: int
    n: int
    seed: int
    samples: int
    max_length: int
    exhaustive_length: int
    words_checked: int
    failures: list[list[str]]
    max_order: int
    max_order_word: list[str]
    cubization_order: int
    explicit_exponent: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "max_length": self.max_length,
            "exhaustive_length": self.exhaustive_length,
            "words_checked": self.words_checked,
            "failures": self.failures,
            "max_order": self.max_order,
            "max_order_word": self.max_order_word,
            "cubization_order": self.cubization_order,
            "explicit_exponent": self.explicit_exponent,
            "passed": self.passed,
        }


def cubization_exponent_check(
    graph: CayleyGraph,
    k: int,
    n: int,
    samples: int = 500,
    seed: int = 0,
    max_length: int = 32,
    cover: CoverGraph | None = None,
    exhaustive_length: int = 3,
) -> ExponentReport:
    """Check ``w^(kn) = 1`` for words ``w`` in the cubization generators."""
    if n % exponent(graph.group) != 0:
        raise PreconditionError(f"exponent of the base group does not divide {n}")
    voltages = voltages_for(graph, k)
    lifts = cubization_generators(voltages)
    probes = probe_vertices(voltages)
    gens = graph.gens
    rng = random.Random(seed)
    words: list[tuple[str, ...]] = []
    if cover is not None:
        layer: list[tuple[str, ...]] = [()]
        for _ in range(exhaustive_length):
            layer = [w + (s,) for w in layer for s in gens.symbols]
            words += layer
    for _ in range(samples):
        length = rng.randint(1, max_length)
        words.append(tuple(rng.choice(gens.symbols) for _ in range(length)))
    failures, best, best_word = [], 1, []
    for w in words:
        lift = word_lift(lifts, gens, w)
        powered = lift.power(k * n)
        ok = powered.fixes(probes)
        if cover is not None:
            ok = ok and np.array_equal(powered.permutation(cover), np.arange(cover.vertex_count))
        if not ok:
            failures.append(list(w))
            continue
        order = lift_order(lift, k * n)
        if order is not None and order > best:
            best, best_word = order, list(w)
    explicit = None
    if cover is not None:
        explicit = exponent(cubization_group_explicit(cover, lifts))
    return ExponentReport(k, n, seed, samples, max_length, exhaustive_length if cover is not None else 0,
                          len(words), failures, best, best_word, cubization_order(graph, k), explicit)


def random_trivial_word(voltages: VoltageData, rng: random.Random, max_length: int = 32) -> tuple[str, ...]:
    """A random word followed by the tree word for the inverse of its value."""
    graph = voltages.graph
    gens = graph.gens  # type: ignore[attr-defined]
    w = tuple(rng.choice(gens.symbols) for _ in range(rng.randint(1, max_length)))
    value = evaluate_word(graph.group, gens, w)  # type: ignore[attr-defined]
    return w + tree_word(voltages, graph.group.inv(value))  # type: ignore[attr-defined]


def cover_report(voltages: VoltageData, cover: CoverGraph) -> dict:
    """Covering identities: vertex count, fibres, degrees, connectivity."""
    graph = voltages.graph
    fibers = np.bincount(np.arange(cover.vertex_count) // cover.fiber, minlength=graph.vertex_count)
    src, dst, base = cover.edge_arrays
    projects = bool(
        np.array_equal(src // cover.fiber, graph.ends[base, 0]) and np.array_equal(dst // cover.fiber, graph.ends[base, 1])
    )
    degree_ok = bool(np.array_equal(cover.degrees(), np.repeat(graph.degrees(), cover.fiber)))
    ncomp, _ = cover.components()
    return {
        "vertex_count": cover.vertex_count,
        "expected_vertex_count": graph.vertex_count * voltages.k**voltages.rank,
        "fiber_sizes_ok": bool((fibers == cover.fiber).all()),
        "projection_ok": projects,
        "degree_ok": degree_ok,
        "connected": ncomp == 1,
    }
