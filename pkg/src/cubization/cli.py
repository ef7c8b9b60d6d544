"""Command-line front end: cover, walls, cubulate, wreath and verify-all.

Every command writes a JSON report (and DOT files where a graph is
produced) into the output directory. Reports contain no timings, so the
same configuration and seed always give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .cayley import CayleyGraph, Multigraph, bridges, build_cayley, graph_from_json, graph_to_dot, left_mult
from .cover import (
    DEFAULT_COVER_CAP,
    build_cover,
    cover_report,
    cubization_exponent_check,
    cubization_generators,
    cubization_group_explicit,
    cubization_order,
    deck_transformation,
    trivial_product_power_is_identity,
    lift_bfs,
    lift_formula,
    lift_order,
    random_trivial_word,
    verify_sabidussi,
    verify_sabidussi_normal_form,
    voltages_for,
)
from .cubulate import (
    DEFAULT_CENSUS_CAP,
    DEFAULT_MEDIAN_CAP,
    DEFAULT_WALL_CAP,
    act_on_dual,
    cube_census,
    dual_skeleton,
    is_median_graph,
)
from .errors import SizeLimitError, ValidationError
from .groups import (
    DEFAULT_CLOSURE_CAP,
    closure_size,
    exponent,
    group_from_json,
    preset,
    wreath_product,
)
from .walls import (
    act_on_walls,
    edge_preimage_components,
    orbit_displacement,
    pseudometric_violations,
    wall_space_from_bridge,
    wall_space_from_cover,
)

log = logging.getLogger(__name__)

OUTPUT_ENV = "CUBIZATION_OUT"
PERMUTATION_AUDIT_CAP = 4096  # cover size up to which G~ is stored as permutations
EXHAUSTIVE_AUDIT_CAP = 200  # points for all-pairs metric audits
LIFT_CROSSCHECK_CAP = 1000


@dataclass
class RunConfig:
    preset: str | None = None
    group_json: str | None = None
    graph_json: str | None = None
    orbit: list[int] | None = None
    k: int = 2
    cap_cover: int = DEFAULT_COVER_CAP
    cap_walls: int = DEFAULT_WALL_CAP
    cap_closure: int = DEFAULT_CLOSURE_CAP
    seed: int = 0
    samples: int = 500
    out: Path = field(default_factory=lambda: Path(os.environ.get(OUTPUT_ENV, "cubization-out")))
    base: str = "trivial"
    fixture: str | None = None

    def validate(self) -> None:
        if self.k < 2:
            raise ValidationError(f"k must be at least 2, got {self.k}")
        if min(self.cap_cover, self.cap_walls, self.cap_closure) <= 0:
            raise ValidationError("caps must be positive")
        if self.samples < 0:
            raise ValidationError("samples must be nonnegative")

    @property
    def tag(self) -> str:
        source = self.preset or (Path(self.group_json).stem if self.group_json else None) \
            or (Path(self.graph_json).stem if self.graph_json else None) or self.fixture or "group"
        return re.sub(r"[^A-Za-z0-9_.-]+", "_", source) + f"_k{self.k}"


def load_group(config: RunConfig):
    if config.group_json:
        try:
            obj = json.loads(Path(config.group_json).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read group JSON: {exc}") from None
        return group_from_json(obj, cap=config.cap_closure)
    if config.preset:
        return preset(config.preset, cap=config.cap_closure)
    raise ValidationError("no group given: use --preset or --group-json")


def _group_info(graph: CayleyGraph) -> dict:
    return {
        "order": graph.group.order,
        "symbols": list(graph.gens.symbols),
        "exponent": exponent(graph.group),
    }


def _write(config: RunConfig, name: str, report: dict, dots: dict[str, str] | None = None) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    path = config.out / f"{name}_{config.tag}.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    for suffix, text in (dots or {}).items():
        (config.out / f"{name}_{config.tag}_{suffix}.dot").write_text(text)
    return path


# Stages -------------------------------------------------------------------

def cmd_cover(config: RunConfig, write: bool = True) -> dict:
    config.validate()
    group, gens = load_group(config)
    graph = build_cayley(group, gens)
    voltages = voltages_for(graph, config.k)
    lifts = cubization_generators(voltages)
    k = config.k
    n_exp = exponent(group)
    report: dict = {
        "stage": "cover",
        "config": {"k": k, "seed": config.seed, "samples": config.samples, "cap_cover": config.cap_cover},
        "group": _group_info(graph),
        "cycle_rank": voltages.rank,
        "cubization_order": cubization_order(graph, k),
        "generators": [lift.to_json() for lift in lifts],
        "generator_orders": [lift_order(lift, k * n_exp) for lift in lifts],
    }
    checks: dict[str, bool] = {}
    try:
        cover = build_cover(voltages, cap=config.cap_cover)
    except SizeLimitError as exc:
        cover = None
        report["regime"] = "implicit"
        report["implicit_reason"] = str(exc)
    dots = {}
    if cover is not None:
        report["regime"] = "explicit"
        structure = cover_report(voltages, cover)
        report["cover"] = structure
        checks["cover_structure"] = structure["vertex_count"] == structure["expected_vertex_count"] and all(
            structure[key] for key in ("fiber_sizes_ok", "projection_ok", "degree_ok", "connected"))
        if cover.vertex_count <= PERMUTATION_AUDIT_CAP:
            cub = cubization_group_explicit(cover, lifts, cap=config.cap_closure)
            sab = verify_sabidussi(cover, cub)
            report["cubization_exponent"] = exponent(cub)
        else:
            sab = verify_sabidussi_normal_form(voltages, cap=config.cap_closure)
        report["sabidussi"] = sab.to_json()
        checks["sabidussi"] = sab.passed
        deck = [deck_transformation(voltages, cover.phases[c]) for c in range(cover.fiber)]
        checks["deck_orders_divide_k"] = all(np.array_equal(t.power(k).permutation(cover), np.arange(cover.vertex_count))
                                             for t in deck[: min(len(deck), 64)])
        if cover.vertex_count <= LIFT_CROSSCHECK_CAP:
            report["lift_crosscheck"] = lift_crosscheck(voltages, cover)
            checks["lift_crosscheck"] = report["lift_crosscheck"]["mismatches"] == 0
        dots["cover"] = graph_to_dot(cover.to_multigraph(), "cover", cover.vertex_labels())
    dots["base"] = graph_to_dot(graph, "base")
    rng = random.Random(config.seed)
    failures = []
    for _ in range(config.samples):
        word = random_trivial_word(voltages, rng)
        if not trivial_product_power_is_identity([lifts[gens.index(s)] for s in word], k, cover=cover):
            failures.append(list(word))
    report["trivial_product_power_is_identity"] = {"seed": config.seed, "samples": config.samples,
                                      "failures": failures[:5], "failure_count": len(failures)}
    checks["trivial_product_power_is_identity"] = not failures
    expo = cubization_exponent_check(graph, k, n_exp, samples=config.samples, seed=config.seed,
                                     cover=cover if cover is not None and cover.vertex_count <= PERMUTATION_AUDIT_CAP else None)
    report["exponent_check"] = expo.to_json()
    checks["exponent_check"] = expo.passed
    report["checks"] = checks
    report["passed"] = all(checks.values())
    if write:
        _write(config, "cover", report, dots)
    return report


def lift_crosscheck(voltages, cover) -> dict:
    """Compare formula lifts with propagated lifts for every element and offset."""
    graph = voltages.graph
    mismatches, checked = [], 0
    for g in range(graph.vertex_count):
        aut = left_mult(graph, g)
        for code in range(cover.fiber):
            a = cover.phases[code]
            formula = lift_formula(voltages, aut, a)
            bfs = lift_bfs(cover, aut, (g, a))
            checked += 1
            same = (np.array_equal(formula.affine_permutation(cover), bfs.perm)
                    and np.array_equal(formula.M, bfs.M) and np.array_equal(formula.c, bfs.c))
            if not same:
                mismatches.append([g, code])
    return {"checked": checked, "mismatches": len(mismatches), "witnesses": mismatches[:5]}


def _bridge_walls(config: RunConfig, graph: Multigraph) -> dict:
    found = bridges(graph)
    orbit = config.orbit if config.orbit is not None else found
    space = wall_space_from_bridge(graph, orbit)
    violations = pseudometric_violations(space)
    ends = graph.vertex_count - 1
    return {
        "stage": "walls",
        "branch": "bridge",
        "bridges": found,
        "orbit": orbit,
        "walls": space.to_json(),
        "pseudometric": violations,
        "distance_first_last": int(space.distance_matrix()[0, ends]) if graph.vertex_count else 0,
        "passed": not any(violations.values()),
    }


def cmd_walls(config: RunConfig, write: bool = True) -> dict:
    config.validate()
    if config.graph_json:
        try:
            graph = graph_from_json(json.loads(Path(config.graph_json).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read graph JSON: {exc}") from None
        if bridges(graph):
            report = _bridge_walls(config, graph)
            if write:
                _write(config, "walls", report)
            return report
        voltages = voltages_for(graph, config.k)
        lifts = []
    else:
        group, gens = load_group(config)
        graph = build_cayley(group, gens)
        voltages = voltages_for(graph, config.k)
        lifts = cubization_generators(voltages)
    cover = build_cover(voltages, cap=config.cap_cover)
    space = wall_space_from_cover(cover)
    k = config.k
    checks: dict[str, bool] = {}
    sizes = [sorted(len(c) for c in edge_preimage_components(cover, e)) for e in range(graph.edge_count)]
    per_edge = [sum(1 for w in space.walls if w.edge == e) for e in range(graph.edge_count)]
    checks["components_per_edge"] = all(len(s) == k for s in sizes)
    checks["walls_per_edge"] = all(c == 2 ** (k - 1) - 1 for c in per_edge)
    report: dict = {
        "stage": "walls",
        "branch": "cover",
        "config": {"k": k},
        "points": space.points,
        "wall_count": len(space.walls),
        "expected_wall_count": graph.edge_count * (2 ** (k - 1) - 1),
        "component_sizes": sizes,
    }
    if space.points <= EXHAUSTIVE_AUDIT_CAP:
        violations = pseudometric_violations(space)
        report["pseudometric"] = violations
        checks["pseudometric"] = not any(violations.values())
        d = space.distance_matrix()
        invariant = True
        for lift in lifts:
            p = lift.permutation(cover)
            invariant &= bool(np.array_equal(d[np.ix_(p, p)], d))
        checks["invariance"] = invariant
    table = {}
    for lift, sym in zip(lifts, graph.gens.symbols if lifts else []):
        act_on_walls(space, lift)
        j_max = min(lift_order(lift, 64) or 64, 32)
        table[sym] = orbit_displacement(space, lift, 0, j_max)
    report["displacement"] = table
    report["checks"] = checks
    report["passed"] = all(checks.values())
    if write:
        _write(config, "walls", report)
    return report


def _fixture_space(name: str):
    if name == "nested-walls":
        path = Multigraph.from_edges(3, [(0, 1), (1, 2)])
        return wall_space_from_bridge(path, [0, 1]), []
    raise ValidationError(f"unknown fixture {name!r}")


def cmd_cubulate(config: RunConfig, write: bool = True) -> dict:
    config.validate()
    if config.fixture:
        space, lifts = _fixture_space(config.fixture)
    else:
        group, gens = load_group(config)
        graph = build_cayley(group, gens)
        voltages = voltages_for(graph, config.k)
        space = wall_space_from_cover(build_cover(voltages, cap=config.cap_cover))
        lifts = cubization_generators(voltages)
    skeleton = dual_skeleton(space, max_walls=config.cap_walls)
    checks: dict[str, bool] = {}
    n = len(skeleton.vertices)
    report: dict = {
        "stage": "cubulate",
        "config": {"k": config.k, "cap_walls": config.cap_walls},
        "census": cube_census(space, skeleton) if len(space.walls) <= DEFAULT_CENSUS_CAP else None,
        "skeleton": skeleton.to_json(),
    }
    if n <= DEFAULT_MEDIAN_CAP:
        report["median"] = is_median_graph(n, skeleton.edges)
        checks["median"] = report["median"]
    if space.points <= EXHAUSTIVE_AUDIT_CAP:
        sd = skeleton.distances()
        p = np.array(skeleton.principal)
        checks["isometric_embedding"] = bool(np.array_equal(sd[np.ix_(p, p)], space.distance_matrix()))
    intertwines = True
    for lift in lifts:
        perm = lift.permutation(space.cover)
        img = act_on_dual(space, skeleton, perm)
        intertwines &= all(int(img[skeleton.principal[x]]) == skeleton.principal[int(perm[x])] for x in range(space.points))
    if lifts:
        checks["action_intertwines"] = intertwines
    report["checks"] = checks
    report["passed"] = all(checks.values())
    if write:
        _write(config, "cubulate", report, {"dual": skeleton.to_dot()})
    return report


def cmd_wreath(config: RunConfig, write: bool = True) -> dict:
    config.validate()
    base, base_gens = preset(config.base, cap=config.cap_closure)
    positive = list(base_gens.elements[0::2])
    group, gens = wreath_product(config.k, base, positive, cap=config.cap_closure)
    n = exponent(base)
    e = exponent(group)
    generated = closure_size(group, gens.elements[0::2])
    report = {
        "stage": "wreath",
        "config": {"k": config.k, "base": config.base},
        "base_order": base.order,
        "base_exponent": n,
        "order": group.order,
        "exponent": e,
        "exponent_divides_kn": (config.k * n) % e == 0,
        "generators": len(gens) // 2,
        "generated_order": generated,
        "passed": (config.k * n) % e == 0 and generated == group.order,
    }
    if write:
        config = replace(config, preset=f"wreath_{config.base}")
        _write(config, "wreath", report)
    return report


VERIFY_MATRIX = [
    ("cover", "cyclic:2", 2), ("cover", "cyclic:3", 2), ("cover", "cyclic:3", 3), ("cover", "cyclic:5", 4),
    ("cover", "dihedral:3", 2), ("cover", "elementary_abelian_2:2", 2), ("cover", "burnside_2_3", 2),
    ("walls", "cyclic:3", 2), ("walls", "cyclic:3", 3), ("walls", "cyclic:2", 2), ("walls", "elementary_abelian_2:2", 2),
    ("cubulate", "cyclic:3", 2), ("cubulate", "cyclic:3", 3), ("cubulate", "cyclic:2", 2),
    ("cubulate", "elementary_abelian_2:2", 2),
]

WREATH_MATRIX = [("cyclic:3", 2), ("trivial", 2), ("cyclic:2", 3), ("cyclic:2", 2)]


def cmd_verify_all(config: RunConfig) -> dict:
    config.validate()
    commands = {"cover": cmd_cover, "walls": cmd_walls, "cubulate": cmd_cubulate}
    stages = []
    runs = [(c, p, k) for c, p, k in VERIFY_MATRIX]
    if config.group_json:
        load_group(config)
        runs += [(c, None, config.k) for c in ("cover", "walls", "cubulate")]
    for command, name, k in runs:
        sub = replace(config, preset=name, k=k, group_json=None if name else config.group_json)
        result = commands[command](sub, write=False)
        stages.append({"command": command, "group": name or config.group_json, "k": k,
                       "passed": result["passed"], "checks": result.get("checks", {})})
    fixture = cmd_cubulate(replace(config, fixture="nested-walls", preset=None), write=False)
    stages.append({"command": "cubulate", "group": "nested-walls", "k": config.k, "passed": fixture["passed"],
                   "checks": fixture["checks"]})
    for base, k in WREATH_MATRIX:
        result = cmd_wreath(replace(config, base=base, k=k), write=False)
        stages.append({"command": "wreath", "group": base, "k": k, "passed": result["passed"],
                       "order": result["order"], "exponent": result["exponent"]})
    report = {
        "stage": "verify-all",
        "version": __version__,
        "seed": config.seed,
        "samples": config.samples,
        "stages": stages,
        "passed": all(s["passed"] for s in stages),
    }
    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / "verify_all.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report


# Argument parsing ---------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubization", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--preset", help="e.g. cyclic:3, dihedral:4, elementary_abelian_2:2, burnside_2_3, cyclic:2*cyclic:3")
        p.add_argument("--group-json", help="group in table or permutation-generator JSON format")
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--cap-cover", type=int, default=DEFAULT_COVER_CAP)
        p.add_argument("--cap-walls", type=int, default=DEFAULT_WALL_CAP)
        p.add_argument("--cap-closure", type=int, default=DEFAULT_CLOSURE_CAP)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=500)
        p.add_argument("--out", type=Path, default=None, help=f"output directory (env {OUTPUT_ENV})")

    for name in ("cover", "walls", "cubulate", "verify-all"):
        common(sub.add_parser(name))
    sub.choices["walls"].add_argument("--graph-json", help="generic multigraph input")
    sub.choices["walls"].add_argument("--orbit", help="comma-separated edge indices for the bridge branch")
    sub.choices["cubulate"].add_argument("--fixture", choices=["nested-walls"])
    wreath = sub.add_parser("wreath")
    common(wreath)
    wreath.add_argument("--base", default="trivial")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        preset=args.preset, group_json=args.group_json, k=args.k, cap_cover=args.cap_cover,
        cap_walls=args.cap_walls, cap_closure=args.cap_closure, seed=args.seed, samples=args.samples,
        graph_json=getattr(args, "graph_json", None), fixture=getattr(args, "fixture", None),
        base=getattr(args, "base", "trivial"),
    )
    if getattr(args, "orbit", None):
        try:
            config.orbit = [int(x) for x in args.orbit.split(",")]
        except ValueError:
            raise ValidationError("--orbit must be comma-separated integers") from None
    if args.out is not None:
        config.out = args.out
    return config


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    commands = {"cover": cmd_cover, "walls": cmd_walls, "cubulate": cmd_cubulate,
                "wreath": cmd_wreath, "verify-all": cmd_verify_all}
    try:
        config = _config(args)
        report = commands[args.command](config)
    except (ValidationError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status = "PASS" if report["passed"] else "FAIL"
    print(f"{args.command}: {status} (reports in {config.out})")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
