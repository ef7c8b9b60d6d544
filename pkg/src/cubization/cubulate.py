"""Dual cube complex of a finite wall space.

An orientation is an int whose bit ``w`` is 0 when wall ``w``'s canonical
side (the one containing point 0) is chosen and 1 for the complement.
Consistent orientations are the vertices of the dual complex; two are
adjacent when they differ on exactly one wall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .cover import Lift
from .errors import SizeLimitError, StructuralError
from .walls import WallSpace, act_on_walls, point_action

DEFAULT_WALL_CAP = 20
DEFAULT_DUAL_VERTEX_CAP = 2**20
DEFAULT_MEDIAN_CAP = 500
DEFAULT_CENSUS_CAP = 64


def intersection_table(space: WallSpace) -> np.ndarray:
    """``table[w1, f1, w2, f2]``: halfspace ``(w1, f1)`` meets halfspace ``(w2, f2)``."""
    cached = space.__dict__.get("_intersections")
    if cached is not None:
        return cached
    b = space.membership.astype(np.int64)
    sides = np.stack([b, 1 - b], axis=1)  # (W, 2, P)
    flat = sides.reshape(-1, space.points)
    table = (flat @ flat.T > 0).reshape(len(space.walls), 2, len(space.walls), 2)
    space._intersections = table
    return table


def principal_orientation(space: WallSpace, point: int) -> int:
    return sum(1 << int(w) for w in np.flatnonzero(~space.membership[:, point]))


def _bits(o: int, w: int) -> np.ndarray:
    return (o >> np.arange(w)) & 1


def is_consistent(space: WallSpace, o: int) -> bool:
    w = len(space.walls)
    f = _bits(o, w)
    idx = np.arange(w)
    table = intersection_table(space)
    return bool(table[idx[:, None], f[:, None], idx[None, :], f[None, :]].all())


def enumerate_consistent(space: WallSpace, cap: int = DEFAULT_WALL_CAP) -> list[int]:
    """Every consistent orientation, by brute force over all ``2**w``."""
    w = len(space.walls)
    if w > cap:
        raise SizeLimitError(f"{w} walls exceeds enumeration cap {cap}")
    masks = np.arange(2**w, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(w)[None, :]) & 1
    ok = np.ones(len(masks), dtype=bool)
    table = intersection_table(space)
    for a in range(w):
        for b in range(a + 1, w):
            ok &= table[a, bits[:, a], b, bits[:, b]]
    return masks[ok].tolist()


@dataclass(eq=False)
class DualSkeleton:
    wall_count: int
    vertices: np.ndarray  # orientations, sorted
    edges: np.ndarray  # (E, 2) vertex index pairs, i < j, sorted
    principal: list[int]  # point -> vertex index

    def index(self, orientations) -> np.ndarray:
        """Vertex indices of the given orientations, -1 where absent."""
        o = np.asarray(orientations, dtype=np.int64)
        pos = np.minimum(np.searchsorted(self.vertices, o), max(len(self.vertices) - 1, 0))
        return np.where(self.vertices[pos] == o, pos, -1)

    def distances(self) -> np.ndarray:
        return graph_distances(len(self.vertices), self.edges)

    def to_json(self) -> dict:
        return {
            "walls": self.wall_count,
            "vertices": self.vertices.tolist(),
            "edges": self.edges.tolist(),
            "principal": self.principal,
        }

    def to_dot(self, name: str = "dual") -> str:
        lines = [f"graph {name} {{"]
        width = max(self.wall_count, 1)
        for i, o in enumerate(self.vertices.tolist()):
            lines.append(f'  {i} [label="{o:0{width}b}"];')
        lines += [f"  {i} -- {j};" for i, j in self.edges.tolist()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def dual_skeleton(space: WallSpace, max_walls: int = DEFAULT_WALL_CAP,
                  max_vertices: int = DEFAULT_DUAL_VERTEX_CAP) -> DualSkeleton:
    """Flip-connected component of the principal orientations among consistent ones.

    Breadth-first over whole layers: flipping wall ``j`` keeps an orientation
    consistent iff the new halfspace of ``j`` meets every other chosen one.
    """
    w = len(space.walls)
    if w > max_walls:
        raise SizeLimitError(f"{w} walls exceeds cap {max_walls}")
    table = intersection_table(space)
    idx = np.arange(w)
    shifts = np.arange(w, dtype=np.int64)
    principal = [principal_orientation(space, p) for p in range(space.points)]
    seen = np.unique(np.array(principal, dtype=np.int64))
    frontier = seen
    while frontier.size:
        bits = (frontier[:, None] >> shifts[None, :]) & 1
        found = []
        for j in range(w):
            meets = table[j, 1 - bits[:, j][:, None], idx[None, :], bits]
            meets[:, j] = True
            movable = frontier[meets.all(axis=1)]
            found.append(movable ^ (1 << j))
        fresh = np.unique(np.concatenate(found))
        fresh = fresh[~np.isin(fresh, seen, assume_unique=True)]
        if seen.size + fresh.size > max_vertices:
            raise SizeLimitError(f"dual skeleton exceeds {max_vertices} vertices")
        seen = np.union1d(seen, fresh)
        frontier = fresh
    vertices = seen
    n = vertices.size
    edges = []
    for j in range(w):
        up = vertices[((vertices >> j) & 1) == 0]
        partner = up | (1 << j)
        pos = np.searchsorted(vertices, partner)
        hit = pos < n
        hit[hit] = vertices[pos[hit]] == partner[hit]
        edges.append(np.stack([np.searchsorted(vertices, up[hit]), pos[hit]], axis=1))
    pairs = np.concatenate(edges) if edges else np.zeros((0, 2), dtype=np.int64)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    index_of = np.searchsorted(vertices, np.array(principal, dtype=np.int64))
    return DualSkeleton(w, vertices, pairs, index_of.tolist())


def graph_distances(n: int, edges) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    e = np.array(edges, dtype=np.int64).reshape(-1, 2)
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n)).tocsr()
    d = shortest_path(adj, directed=False, unweighted=True)
    if np.isinf(d).any():
        raise ValueError("graph is disconnected")
    return d.astype(np.int64)


def is_median_graph(n: int, edges, cap: int = DEFAULT_MEDIAN_CAP) -> bool:
    """Every triple has exactly one vertex on geodesics between each pair."""
    if n > cap:
        raise SizeLimitError(f"{n} vertices exceeds median-check cap {cap}")
    return median_violation(n, edges) is None


def median_violation(n: int, edges) -> tuple[int, int, int] | None:
    """A triple without a unique median, or ``None``."""
    d = graph_distances(n, edges)
    for u in range(n):
        # between[v, m]: m lies on a geodesic from u to v
        between_u = d[u][None, :] + d == d[u][:, None]
        for v in range(u, n):
            mids = np.flatnonzero(between_u[v])
            ws = np.arange(v, n)
            on_vw = d[v, mids][None, :] + d[np.ix_(ws, mids)] == d[v, ws][:, None]
            on_uw = between_u[np.ix_(ws, mids)]
            counts = (on_vw & on_uw).sum(axis=1)
            bad = np.flatnonzero(counts != 1)
            if bad.size:
                return u, v, int(ws[bad[0]])
    return None


def crossing_matrix(space: WallSpace) -> np.ndarray:
    """Walls cross when all four intersections of their halfspaces are nonempty."""
    t = intersection_table(space)
    cross = t.all(axis=(1, 3))
    np.fill_diagonal(cross, False)
    return cross


def max_cube_dimension(space: WallSpace, cap: int = DEFAULT_CENSUS_CAP) -> int:
    """Largest family of pairwise crossing walls (Bron-Kerbosch with pivoting)."""
    w = len(space.walls)
    if w > cap:
        raise SizeLimitError(f"{w} walls exceeds census cap {cap}")
    if w == 0:
        return 0
    cross = crossing_matrix(space)
    nbr = [sum(1 << int(j) for j in np.flatnonzero(cross[i])) for i in range(w)]
    best = 0

    def expand(size: int, cand: int, excl: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        pivot = max(_iter_bits(cand | excl), key=lambda u: (cand & nbr[u]).bit_count())
        for v in list(_iter_bits(cand & ~nbr[pivot])):
            expand(size + 1, cand & nbr[v], excl & nbr[v])
            cand &= ~(1 << v)
            excl |= 1 << v

    expand(0, (1 << w) - 1, 0)
    return best


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def act_on_dual(space: WallSpace, skeleton: DualSkeleton, action: Lift | np.ndarray) -> np.ndarray:
    """Permutation of skeleton vertices induced by a point action."""
    perm = point_action(space, action)
    pi = act_on_walls(space, perm)
    inv = np.argsort(perm)
    w = skeleton.wall_count
    # the image of wall j's canonical side is canonical iff it contains point 0
    flips = (~space.membership[:, inv[0]]).astype(np.int64)
    bits = (skeleton.vertices[:, None] >> np.arange(w)[None, :]) & 1
    image = ((bits ^ flips[None, :]) << pi[None, :]).sum(axis=1) if w else np.zeros(len(skeleton.vertices), np.int64)
    out = skeleton.index(image)
    if np.any(out < 0):
        bad = int(skeleton.vertices[np.argmax(out < 0)])
        raise StructuralError(f"image of dual vertex {bad} is not in the skeleton")
    n = len(skeleton.vertices)
    mapped = np.sort(out[skeleton.edges], axis=1)
    if not np.array_equal(np.sort(mapped[:, 0] * n + mapped[:, 1]), skeleton.edges[:, 0] * n + skeleton.edges[:, 1]):
        raise StructuralError("dual action does not preserve edges")
    return out


def cube_census(space: WallSpace, skeleton: DualSkeleton | None = None) -> dict:
    cross = crossing_matrix(space)
    report = {
        "walls": len(space.walls),
        "crossing_pairs": int(np.count_nonzero(cross)) // 2,
        "max_cube_dimension": max_cube_dimension(space),
    }
    if skeleton is not None:
        report["vertices"] = len(skeleton.vertices)
        report["edges"] = len(skeleton.edges)
    return report
