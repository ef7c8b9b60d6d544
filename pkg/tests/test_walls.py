import json
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cayley, pipeline, wall_space
from cubization.cayley import Multigraph, left_mult
from cubization.cover import deck_transformation, identity_lift, lift_formula
from cubization.errors import PreconditionError, StructuralError, ValidationError
from cubization.walls import (
    WallSpace,
    act_on_walls,
    edge_orbit,
    edge_preimage_components,
    orbit_displacement,
    pseudometric_violations,
    wall_distance,
    wall_space_from_bridge,
    wall_space_from_cover,
    walls_from_components,
)

COVERED = [("cyclic:3", 2), ("cyclic:3", 3), ("cyclic:2", 2), ("cyclic:4", 2), ("cyclic:2", 3),
           ("elementary_abelian_2:2", 2), ("dihedral:3", 2)]


def nx_cover(cover):
    g = nx.MultiGraph()
    g.add_nodes_from(range(cover.vertex_count))
    src, dst, base = cover.edge_arrays
    for u, v, e in zip(src.tolist(), dst.tolist(), base.tolist()):
        g.add_edge(u, v, base=e)
    return g


def nx_components_without(cover, e):
    g = nx_cover(cover)
    g.remove_edges_from([(u, v, key) for u, v, key, data in g.edges(keys=True, data=True) if data["base"] == e])
    return sorted(sorted(c) for c in nx.connected_components(g))


def separating_walls_oracle(space, u, v):
    """Count walls by checking set membership of each side directly."""
    count = 0
    for w in space.walls:
        side = {p for p in range(space.points) if w.side >> p & 1}
        count += (u in side) != (v in side)
    return count


def test_hexagon_components(hexagon):
    _, _, cover, _ = hexagon
    for e in range(3):
        comps = edge_preimage_components(cover, e)
        assert sorted(len(c) for c in comps) == [3, 3]


def test_nine_cycle_components():
    cover = pipeline("cyclic:3", 3)[2]
    assert cover.vertex_count == 9
    for e in range(3):
        assert [len(c) for c in edge_preimage_components(cover, e)] == [3, 3, 3]


def test_four_cycle_components():
    cover = pipeline("cyclic:2", 2)[2]
    assert cover.vertex_count == 4
    assert all(len(c) == 2 for e in range(2) for c in edge_preimage_components(cover, e))


@pytest.mark.parametrize("name,k", COVERED)
def test_components_match_networkx(name, k):
    cover = pipeline(name, k)[2]
    for e in range(cover.graph.edge_count):
        comps = [c.tolist() for c in edge_preimage_components(cover, e)]
        assert comps == nx_components_without(cover, e)


@pytest.mark.parametrize("k,count", [(2, 1), (3, 3), (4, 7), (5, 15)])
def test_bipartition_count(k, count):
    comps = [[2 * i, 2 * i + 1] for i in range(k)]
    walls = walls_from_components(comps, 2 * k)
    assert len(walls) == count
    assert len({w.side for w in walls}) == count
    full = (1 << 2 * k) - 1
    for w in walls:
        assert w.side & 1
        assert w.side not in (0, full)
        # every side is a union of whole components
        for c in comps:
            bits = {w.side >> p & 1 for p in c}
            assert len(bits) == 1


def test_bipartitions_are_all_splits():
    k = 4
    comps = [[i] for i in range(k)]
    got = {w.side for w in walls_from_components(comps, k)}
    expected = set()
    for r in range(1, k):
        for sub in combinations(range(k), r):
            side = sum(1 << i for i in sub)
            expected.add(side if side & 1 else ((1 << k) - 1) ^ side)
    assert got == expected


def test_walls_from_components_needs_two():
    with pytest.raises(ValidationError):
        walls_from_components([[0, 1]], 2)


@pytest.mark.parametrize("name,k,walls", [("cyclic:3", 2, 3), ("cyclic:3", 3, 9), ("cyclic:2", 2, 2),
                                          ("cyclic:2", 3, 6), ("elementary_abelian_2:2", 2, 8)])
def test_wall_counts(name, k, walls):
    space = wall_space(name, k)
    assert len(space.walls) == walls
    assert len(space.walls) == cayley(name).edge_count * (2 ** (k - 1) - 1)


def test_hexagon_distance_is_graph_distance(hexagon):
    space = wall_space("cyclic:3", 2)
    d = space.distance_matrix()
    assert d[0, 0] == 0
    assert sorted(d[0].tolist()) == [0, 1, 1, 2, 2, 3]
    oracle = dict(nx.all_pairs_shortest_path_length(nx_cover(hexagon[2])))
    for u in range(6):
        for v in range(6):
            assert d[u, v] == oracle[u][v] == wall_distance(space, u, v)


@pytest.mark.parametrize("name", ["cyclic:2", "cyclic:4", "cyclic:7"])
def test_even_cycle_covers_have_graph_metric(name):
    space = wall_space(name, 2)
    cover = space.cover
    oracle = dict(nx.all_pairs_shortest_path_length(nx_cover(cover)))
    d = space.distance_matrix()
    assert all(d[u, v] == oracle[u][v] for u in range(space.points) for v in range(space.points))


@pytest.mark.parametrize("name,k", COVERED)
def test_distance_matches_direct_count(name, k):
    space = wall_space(name, k)
    d = space.distance_matrix()
    rng = np.random.default_rng(0)
    for _ in range(40):
        u, v = rng.integers(space.points, size=2).tolist()
        assert d[u, v] == wall_distance(space, u, v) == separating_walls_oracle(space, u, v)


@pytest.mark.parametrize("name,k", COVERED)
def test_pseudometric(name, k):
    space = wall_space(name, k)
    assert pseudometric_violations(space) == {"asymmetric": 0, "nonzero_diagonal": 0, "triangle": 0}


@pytest.mark.parametrize("name,k", COVERED)
def test_adjacent_points_are_close(name, k):
    # an edge crosses only the walls of its own base edge
    space = wall_space(name, k)
    cover = space.cover
    src, dst, _ = cover.edge_arrays
    d = space.distance_matrix()
    # and those separating two of the k components: 2**(k-2) of them
    assert set(d[src, dst].tolist()) == {2 ** (k - 2)}


def test_wall_distance_rejects_bad_points():
    space = wall_space("cyclic:3", 2)
    with pytest.raises(ValidationError):
        wall_distance(space, 0, 6)


def test_cover_with_bridge_rejected():
    path = Multigraph.from_edges(2, [(0, 1)])
    from cubization.cover import build_cover, voltages_for
    cover = build_cover(voltages_for(path, 2))
    with pytest.raises(PreconditionError):
        wall_space_from_cover(cover)


# Bridge branch ------------------------------------------------------------

def path_graph(n):
    return Multigraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_path_of_three():
    space = wall_space_from_bridge(path_graph(3), [0, 1])
    assert len(space.walls) == 2
    assert space.distance_matrix().tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_path_walls(n):
    space = wall_space_from_bridge(path_graph(n), range(n - 1))
    assert len(space.walls) == n - 1
    assert wall_distance(space, 0, n - 1) == n - 1
    d = space.distance_matrix()
    assert all(d[i, j] == abs(i - j) for i in range(n) for j in range(n))


def test_star_walls():
    star = Multigraph.from_edges(5, [(0, i) for i in range(1, 5)])
    space = wall_space_from_bridge(star, range(4))
    assert len(space.walls) == 4
    assert wall_distance(space, 1, 2) == 2
    assert wall_distance(space, 0, 3) == 1


def test_bridge_orbit_under_reflection():
    g = path_graph(4)
    # reflection i -> 3 - i sends edge i to edge 2 - i
    from cubization.cayley import GraphAutomorphism
    darts = [2 * (2 - (d >> 1)) + (1 - (d & 1)) for d in range(6)]
    flip = GraphAutomorphism(np.array([3, 2, 1, 0]), np.array(darts))
    assert flip.check(g, labelled=False) and not flip.check(g)
    assert edge_orbit([0], [flip]) == [0, 2]
    assert len(wall_space_from_bridge(g, [0], [flip]).walls) == 2


def test_non_bridge_rejected():
    with pytest.raises(PreconditionError):
        wall_space_from_bridge(cayley("cyclic:3"), [0])


# Actions -------------------------------------------------------------------

def test_identity_fixes_walls(hexagon):
    graph, voltages, cover, _ = hexagon
    space = wall_space("cyclic:3", 2)
    assert act_on_walls(space, identity_lift(voltages)).tolist() == [0, 1, 2]


def test_generator_permutes_hexagon_walls(hexagon):
    _, _, cover, lifts = hexagon
    space = wall_space("cyclic:3", 2)
    pi = act_on_walls(space, lifts[0])
    assert sorted(pi.tolist()) == [0, 1, 2]
    assert not np.any(pi == np.arange(3))


@pytest.mark.parametrize("name,k", COVERED)
def test_lifts_preserve_wall_structure(name, k):
    graph, voltages, cover, lifts = pipeline(name, k)
    space = wall_space(name, k)
    d = space.distance_matrix()
    for lift in lifts:
        perm = lift.permutation(cover)
        pi = act_on_walls(space, lift)
        assert sorted(pi.tolist()) == list(range(len(space.walls)))
        # the action is by wall-metric isometries
        assert np.array_equal(d[np.ix_(perm, perm)], d)
        # walls over edge e land over the image edge
        for w, wall in enumerate(space.walls):
            image_edge = int(lift.aut.dart_perm[2 * wall.edge]) >> 1
            assert space.walls[pi[w]].edge == image_edge


def test_non_automorphism_rejected():
    space = wall_space("cyclic:3", 2)
    with pytest.raises(StructuralError):
        act_on_walls(space, np.array([0, 2, 1, 3, 4, 5]))


def test_point_action_needs_cover():
    graph, voltages, _, lifts = pipeline("cyclic:3", 2)
    space = wall_space_from_bridge(path_graph(3), [0, 1])
    with pytest.raises(PreconditionError):
        act_on_walls(space, lifts[0])


def test_deck_displacement_on_hexagon(hexagon):
    _, voltages, cover, _ = hexagon
    space = wall_space("cyclic:3", 2)
    assert orbit_displacement(space, deck_transformation(voltages, [1]), j_max=2) == [3, 0]


def test_generator_displacement_on_hexagon(hexagon):
    _, _, cover, lifts = hexagon
    space = wall_space("cyclic:3", 2)
    assert orbit_displacement(space, lifts[0], j_max=3) == [1, 2, 3]


@pytest.mark.parametrize("n", [4, 6, 9, 12])
def test_cycle_displacement_grows_linearly(n):
    graph, voltages, cover, lifts = pipeline(f"cyclic:{n}", 2)
    space = wall_space(f"cyclic:{n}", 2)
    got = orbit_displacement(space, lifts[0], j_max=n - 1)
    # oracle: walk the lift along the cover and measure BFS distance
    dist = nx.single_source_shortest_path_length(nx_cover(cover), 0)
    perm = lifts[0].permutation(cover)
    x, expected = 0, []
    for _ in range(n - 1):
        x = int(perm[x])
        expected.append(dist[x])
    assert got == expected == list(range(1, n))


def test_orbit_displacement_validates():
    space = wall_space("cyclic:3", 2)
    with pytest.raises(ValidationError):
        orbit_displacement(space, np.arange(6), j_max=0)


def test_left_translation_lift_acts():
    graph, voltages, cover, _ = pipeline("dihedral:3", 2)
    space = wall_space("dihedral:3", 2)
    lift = lift_formula(voltages, left_mult(graph, 4), [1] * voltages.rank)
    pi = act_on_walls(space, lift)
    assert sorted(pi.tolist()) == list(range(len(space.walls)))


def test_to_json():
    space = wall_space("cyclic:3", 2)
    obj = json.loads(json.dumps(space.to_json()))
    assert obj["points"] == 6 and len(obj["walls"]) == 3
    assert all(0 in w["side"] and len(w["side"]) == 3 for w in obj["walls"])


small_forests = st.integers(min_value=2, max_value=10).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 10**6), min_size=n - 1, max_size=n - 1))
)


@settings(max_examples=60, deadline=None)
@given(small_forests)
def test_tree_wall_distance_is_tree_distance(data):
    n, seeds = data
    edges = [(i + 1, seeds[i] % (i + 1)) for i in range(n - 1)]
    tree = Multigraph.from_edges(n, edges)
    space = wall_space_from_bridge(tree, range(n - 1))
    nxt = nx.Graph(edges)
    oracle = dict(nx.all_pairs_shortest_path_length(nxt))
    d = space.distance_matrix()
    assert all(d[u, v] == oracle[u][v] for u in range(n) for v in range(n))
    assert isinstance(space, WallSpace)
