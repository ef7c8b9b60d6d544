"""Spaces with walls built from edge preimages in the cover, or from bridges.

A wall is stored by its canonical side, the halfspace containing point 0,
as an integer bitset over the points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .cayley import GraphAutomorphism, Multigraph, bridges
from .cover import CoverGraph, Lift
from .errors import PreconditionError, StructuralError, ValidationError


@dataclass(frozen=True)
class Wall:
    side: int  # bitset of the halfspace containing point 0
    edge: int  # base edge it comes from
    mask: int  # which components joined the first component


def _bits_to_int(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags.astype(bool), bitorder="little").tobytes(), "little")


def _int_to_bits(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


@dataclass(eq=False)
class WallSpace:
    points: int
    walls: list[Wall]
    cover: CoverGraph | None = field(default=None)

    @property
    def full(self) -> int:
        return (1 << self.points) - 1

    def halfspace(self, w: int, flip: int = 0) -> int:
        side = self.walls[w].side
        return self.full ^ side if flip else side

    @cached_property
    def membership(self) -> np.ndarray:
        """``membership[w, p]`` is true when point ``p`` lies on the canonical side of wall ``w``."""
        if not self.walls:
            return np.zeros((0, self.points), dtype=bool)
        return np.stack([_int_to_bits(w.side, self.points) for w in self.walls])

    def distance_matrix(self) -> np.ndarray:
        b = self.membership.astype(np.int64)
        return b.T @ (1 - b) + (1 - b).T @ b

    def to_json(self) -> dict:
        return {
            "points": self.points,
            "walls": [
                {"side": np.flatnonzero(row).tolist(), "edge": w.edge, "mask": w.mask}
                for w, row in zip(self.walls, self.membership)
            ],
        }


def edge_preimage_components(cover: CoverGraph, base_edge: int) -> list[np.ndarray]:
    """Components of the cover minus the open preimage of ``base_edge``."""
    count, labels = cover.components(without_base_edge=base_edge)
    if count != cover.k:
        raise StructuralError(f"preimage of edge {base_edge} leaves {count} components, expected {cover.k}")
    # connected_components numbers labels by lowest vertex already; sort anyway
    comps = [np.flatnonzero(labels == i) for i in range(count)]
    comps.sort(key=lambda c: int(c[0]))
    return comps


def walls_from_components(components: Sequence[Iterable[int]], points: int, edge: int = -1) -> list[Wall]:
    """All ``2**(k-1) - 1`` ways to split ``k`` components into two nonempty groups.

    Component 0 always sits on the first side; bit ``j`` of the mask puts
    component ``j + 1`` there too.
    """
    k = len(components)
    if k < 2:
        raise ValidationError("need at least two components")
    sides = []
    for comp in components:
        flags = np.zeros(points, dtype=bool)
        flags[np.fromiter(comp, dtype=np.int64)] = True
        sides.append(_bits_to_int(flags))
    full = (1 << points) - 1
    out = []
    for mask in range(2 ** (k - 1) - 1):
        side = sides[0]
        for j in range(k - 1):
            if mask >> j & 1:
                side |= sides[j + 1]
        if not side & 1:
            side = full ^ side
        out.append(Wall(side, edge, mask))
    return out


def wall_space_from_cover(cover: CoverGraph) -> WallSpace:
    """Walls from the preimage of every base edge, in base-edge order."""
    if bridges(cover.graph):
        raise PreconditionError("base graph has a bridge; use wall_space_from_bridge")
    walls = []
    for e in range(cover.graph.edge_count):
        comps = edge_preimage_components(cover, e)
        walls += walls_from_components(comps, cover.vertex_count, edge=e)
    return WallSpace(cover.vertex_count, walls, cover)


def edge_orbit(edges: Iterable[int], automorphisms: Sequence[GraphAutomorphism]) -> list[int]:
    orbit = set(edges)
    frontier = list(orbit)
    while frontier:
        e = frontier.pop()
        for aut in automorphisms:
            f = int(aut.dart_perm[2 * e]) >> 1
            if f not in orbit:
                orbit.add(f)
                frontier.append(f)
    return sorted(orbit)


def wall_space_from_bridge(graph: Multigraph, edges: Iterable[int],
                           automorphisms: Sequence[GraphAutomorphism] = ()) -> WallSpace:
    """One wall per edge in the orbit of the given bridge(s), on the base vertices."""
    orbit = edge_orbit(edges, automorphisms)
    is_bridge = set(bridges(graph))
    walls = []
    for e in orbit:
        if e not in is_bridge:
            raise PreconditionError(f"edge {e} is not a bridge")
        labels = graph.components(removed=[e])
        walls.append(Wall(_bits_to_int(labels == labels[0]), e, 0))
    return WallSpace(graph.vertex_count, walls)


def wall_distance(space: WallSpace, u: int, v: int) -> int:
    if not (0 <= u < space.points and 0 <= v < space.points):
        raise ValidationError("unknown point")
    return int(np.count_nonzero(space.membership[:, u] != space.membership[:, v]))


def point_action(space: WallSpace, action: Lift | np.ndarray) -> np.ndarray:
    if isinstance(action, Lift):
        if space.cover is None:
            raise PreconditionError("a lift can only act on a wall space built from a cover")
        return action.permutation(space.cover)
    return np.asarray(action, dtype=np.int64)


def act_on_walls(space: WallSpace, action: Lift | np.ndarray) -> np.ndarray:
    """Permutation ``pi`` of wall indices with ``action(wall w) = wall pi[w]``.

    Walls with identical sides (only possible across base edges) are matched
    in index order.
    """
    perm = point_action(space, action)
    image = np.zeros_like(space.membership)
    image[:, perm] = space.membership
    image[~image[:, 0]] ^= True
    slots: dict[bytes, list[int]] = {}
    for w, row in enumerate(space.membership):
        slots.setdefault(np.packbits(row).tobytes(), []).append(w)
    pi = np.empty(len(space.walls), dtype=np.int64)
    for w, row in enumerate(image):
        bucket = slots.get(np.packbits(row).tobytes())
        if not bucket:
            raise StructuralError(f"image of wall {w} is not a wall")
        pi[w] = bucket.pop(0)
    return pi


def orbit_displacement(space: WallSpace, action: Lift | np.ndarray, basepoint: int = 0, j_max: int = 1) -> list[int]:
    """``wall_distance(x, action^j(x))`` for ``j = 1..j_max``."""
    if j_max < 1:
        raise ValidationError("j_max must be at least 1")
    perm = point_action(space, action)
    out = []
    x = basepoint
    for _ in range(j_max):
        x = int(perm[x])
        out.append(wall_distance(space, basepoint, x))
    return out


def pseudometric_violations(space: WallSpace) -> dict:
    """Count failures of symmetry, zero diagonal and the triangle inequality."""
    d = space.distance_matrix()
    triangle = int(np.count_nonzero(d[:, None, :] > d[:, :, None] + d[None, :, :]))
    return {
        "asymmetric": int(np.count_nonzero(d != d.T)),
        "nonzero_diagonal": int(np.count_nonzero(np.diag(d))),
        "triangle": triangle,
    }
