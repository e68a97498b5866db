"""Loading problem instances from JSON and access to the shipped corpus."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import GrpdError
from .gpath import GPath
from .groups import FiniteGroup, extend_action, group_from_permutations, trivial_group
from .morphism import EquivariantMap
from .space import DiscretePath, GraphAction, SpaceGraph

SCHEMA_VERSION = 1
DEFAULT_GRID = 2


class InputError(GrpdError):
    """The instance file is malformed or describes an invalid structure."""


@dataclass
class NamedMap:
    name: str
    target: "Instance"
    map: EquivariantMap


@dataclass
class Instance:
    name: str
    gaction: GraphAction
    grid: int = DEFAULT_GRID
    basepoints: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    gpaths: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)

    @property
    def group(self) -> FiniteGroup:
        return self.gaction.group


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise InputError(f"{where}: missing field {key!r}")
    return d[key]


def _parse_group(gdef: dict) -> FiniteGroup:
    if "table" in gdef:
        els = [str(x) for x in _need(gdef, "elements", "group")]
        rows = [[str(x) for x in r] for r in gdef["table"]]
        return FiniteGroup.from_table(els, rows)
    if "permutations" in gdef:
        gens = {str(k): [int(i) for i in v] for k, v in gdef["permutations"].items()}
        return group_from_permutations(gens)[0]
    if gdef.get("trivial"):
        return trivial_group()
    raise InputError("group: give either 'elements'/'table' or 'permutations'")


def parse_instance(data: dict, base: Path | None = None) -> Instance:
    try:
        return _parse(data, base)
    except InputError:
        raise
    except GrpdError as exc:
        raise InputError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc!r}") from exc


def _parse(data: dict, base: Path | None) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version}")
    name = str(data.get("name", "unnamed"))
    group = _parse_group(_need(data, "group", name))
    g = _need(data, "graph", name)
    vertices = [str(v) for v in _need(g, "vertices", "graph")]
    graph = SpaceGraph.from_pairs(vertices, [(str(u), str(v)) for u, v in g.get("edges", [])])
    perms = {}
    for gen, table in data.get("action", {}).items():
        if gen not in group:
            raise InputError(f"action: {gen!r} is not a group element")
        perms[gen] = {str(k): str(v) for k, v in table.items()}
    if not perms:
        perms = {gen: {v: v for v in vertices} for gen in group.generating_set()}
    action = extend_action(group, vertices, perms)
    gaction = GraphAction(graph, action)
    grid = int(data.get("grid", DEFAULT_GRID))
    if grid < 1:
        raise InputError("grid must be at least 1")
    inst = Instance(name, gaction, grid)
    for k, v in data.get("basepoints", {}).items():
        if str(v) not in vertices:
            raise InputError(f"basepoint {k!r} is not a vertex")
        inst.basepoints[str(k)] = str(v)
    for k, v in data.get("paths", {}).items():
        inst.paths[str(k)] = DiscretePath([str(x) for x in v])
    for k, v in data.get("gpaths", {}).items():
        cuts = [int(c) for c in _need(v, "cuts", f"gpath {k}")]
        pieces = [[str(x) for x in p] for p in _need(v, "pieces", f"gpath {k}")]
        conns = [str(c) for c in v.get("connectors", [])]
        inst.gpaths[str(k)] = GPath.from_cuts(gaction, cuts, pieces, conns)
    for k, v in data.get("pairs", {}).items():
        a, b = v
        for x in (a, b):
            if x not in inst.gpaths:
                raise InputError(f"pair {k!r} mentions unknown G-path {x!r}")
        inst.pairs[str(k)] = (a, b)
    for k, v in data.get("maps", {}).items():
        tspec = _need(v, "target", f"map {k}")
        if isinstance(tspec, str):
            if base is None:
                raise InputError("map targets given by file name need a base directory")
            tspec = json.loads((base / tspec).read_text())
        target = _parse(tspec, base)
        hom = {str(a): str(b) for a, b in v.get("hom", {}).items()}
        for a in group.elements:
            hom.setdefault(a, target.group.identity)
        carrier = {str(a): str(b) for a, b in _need(v, "carrier", f"map {k}").items()}
        m = EquivariantMap(gaction.groupoid, target.gaction.groupoid, hom, carrier)
        errs = m.check()
        if errs:
            raise InputError(f"map {k!r}: {errs[0]}")
        inst.maps[str(k)] = NamedMap(str(k), target, m)
    return inst


def load_instance(path: str | Path) -> Instance:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{p} is not valid JSON: {exc}") from exc
    return parse_instance(data, p.parent)


CORPUS = ("point-z3", "point-s3", "reflection-c4", "rotation-c6", "plus-klein", "quotient-c6-c3")


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("grpd") / "data" / f"{name}.json"))


def load_corpus() -> dict[str, Instance]:
    return {name: load_instance(corpus_path(name)) for name in CORPUS}
