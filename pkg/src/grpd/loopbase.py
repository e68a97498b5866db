"""Free loop groupoids and based path/loop groupoids, each in a pullback form
and a reduced translation form."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidStructure
from .groupoid import (EquivalenceCertificate, FiniteGroupoid, TranslationGroupoid, are_equivalent,
                       isotropy, translation_groupoid, unit_groupoid)
from .groups import make_action, product_action
from .labels import render
from .morphism import (EquivariantMap, NaturalTransformation, PullbackResult, StrictMorphism,
                       constant_map, groupoid_pullback, natural_transformation_exists)
from .space import (DiscretePath, GraphAction, SpaceGraph, constant_path, enumerate_paths,
                    free_path_translation_groupoid)

POINT = "•"


@dataclass
class PathContext:
    """The groupoids shared by every construction over one graph action and grid."""

    gaction: GraphAction
    T: int
    paths: TranslationGroupoid = field(init=False)
    square: TranslationGroupoid = field(init=False)
    point: TranslationGroupoid = field(init=False)

    def __post_init__(self):
        self.paths = free_path_translation_groupoid(self.gaction, self.T)
        a = self.gaction.action
        self.square = translation_groupoid(product_action(a, a), validate=False)
        self.point = unit_groupoid([POINT])

    @property
    def space(self) -> TranslationGroupoid:
        return self.gaction.groupoid

    @property
    def group(self):
        return self.gaction.group


def evaluation_map(ctx: PathContext) -> EquivariantMap:
    """ev(g, α) = ((g, g), (α(0), α(T)))"""
    return EquivariantMap(ctx.paths, ctx.square, {g: (g, g) for g in ctx.group.elements},
                          {a: (a.samples[0], a.samples[-1]) for a in ctx.paths.objects})


def endpoint_map(ctx: PathContext, end: int) -> EquivariantMap:
    """ev_0 or ev_1 : G⋉X^I → G⋉X."""
    idx = 0 if end == 0 else -1
    return EquivariantMap(ctx.paths, ctx.space, {g: g for g in ctx.group.elements},
                          {a: a.samples[idx] for a in ctx.paths.objects})


def diagonal_map(ctx: PathContext) -> EquivariantMap:
    return EquivariantMap(ctx.space, ctx.square, {g: (g, g) for g in ctx.group.elements},
                          {x: (x, x) for x in ctx.space.objects})


def constant_paths_map(ctx: PathContext) -> EquivariantMap:
    """x ↦ the constant path at x."""
    return EquivariantMap(ctx.space, ctx.paths, {g: g for g in ctx.group.elements},
                          {x: constant_path(x, ctx.T) for x in ctx.space.objects})


def verify_diagonal_factorization(ctx: PathContext) -> NaturalTransformation | None:
    """A natural transformation from ev∘(constant paths) to the diagonal, if one exists."""
    k = constant_paths_map(ctx)
    lhs = k.then(evaluation_map(ctx)).strict()
    return natural_transformation_exists(lhs, diagonal_map(ctx).strict())


@dataclass
class LoopGroupoids:
    pullback: PullbackResult          # G⋉X ×_{(G×G)⋉(X×X)} G⋉X^I along Δ and ev
    reduced: TranslationGroupoid      # G ⋉ {(α, g) : α(0) = g·α(T)}
    certificate: EquivalenceCertificate


def reduced_loop_groupoid(ctx: PathContext) -> TranslationGroupoid:
    G = ctx.group
    act = ctx.gaction.action
    points = [(a, g) for a in ctx.paths.objects for g in G.elements
              if a.samples[0] == act(g, a.samples[-1])]
    pact = ctx.paths.action

    def move(k, ag):
        a, g = ag
        return (pact(k, a), G.conj(k, g))

    return translation_groupoid(make_action(G, points, move), validate=False)


def free_loop_groupoid(ctx: PathContext) -> LoopGroupoids:
    pb = groupoid_pullback(diagonal_map(ctx).strict(), evaluation_map(ctx).strict())
    red = reduced_loop_groupoid(ctx)
    return LoopGroupoids(pb, red, are_equivalent(pb.groupoid, red))


@dataclass
class ProjectionReport:
    morphism: EquivariantMap
    loop_classes: int
    path_classes_hit: int
    non_injective: bool
    example: tuple | None = None   # two non-isomorphic loops with isomorphic paths

    def to_json(self):
        return {"loop_classes": self.loop_classes, "path_classes_hit": self.path_classes_hit,
                "non_injective_on_classes": self.non_injective,
                "example": None if self.example is None else [render(x) for x in self.example]}


def loop_to_path_projection(ctx: PathContext, loops: TranslationGroupoid) -> ProjectionReport:
    """(α, g) ↦ α, with a report on what happens to isomorphism classes."""
    G = ctx.group
    f = EquivariantMap(loops, ctx.paths, {g: g for g in G.elements}, {o: o[0] for o in loops.objects})
    comps = loops.components()
    seen: dict = {}
    example = None
    for members in comps:
        rep = members[0]
        pc = ctx.paths.component_of[rep[0]]
        if pc in seen and example is None:
            example = (seen[pc], rep)
        seen.setdefault(pc, rep)
    return ProjectionReport(f, len(comps), len(seen), example is not None, example)


@dataclass
class BasedGroupoids:
    kind: str
    pullback: PullbackResult
    reduced: FiniteGroupoid
    certificate: EquivalenceCertificate
    alternative: PullbackResult | None = None
    alternative_certificate: EquivalenceCertificate | None = None


def _check_basepoint(ctx: PathContext, x) -> None:
    if x not in ctx.gaction.action.carrier:
        raise InvalidStructure(f"basepoint {x!r} is not a vertex")


def reduced_based_paths(ctx: PathContext, x, y) -> FiniteGroupoid:
    """P_{x,y} = {(α, k) : α(0) = x, α(T) = k·y} as a discrete groupoid."""
    act = ctx.gaction.action
    points = [(a, k) for a in ctx.paths.objects if a.samples[0] == x
              for k in ctx.group.elements if a.samples[-1] == act(k, y)]
    return unit_groupoid(points)


def reduced_path_space(ctx: PathContext, x) -> TranslationGroupoid:
    """G ⋉ {(α, g, w) : α(0) = x, α(T) = g·w} with k·(α, g, w) = (α, g k^-1, k w)."""
    G = ctx.group
    act = ctx.gaction.action
    points = [(a, g, w) for a in ctx.paths.objects if a.samples[0] == x
              for g in G.elements for w in act.carrier if a.samples[-1] == act(g, w)]
    return translation_groupoid(
        make_action(G, points, lambda k, p: (p[0], G.mul(p[1], G.inv(k)), act(k, p[2]))), validate=False)


def based_groupoid(ctx: PathContext, kind: str, x, y=None) -> BasedGroupoids:
    """kind is "omega_xy" (paths from x to y), "omega_x" (loops at x) or "path_x" (paths from x)."""
    _check_basepoint(ctx, x)
    ev = evaluation_map(ctx).strict()
    if kind == "omega_xy":
        if y is None:
            raise InvalidStructure("omega_xy needs two basepoints")
        _check_basepoint(ctx, y)
        pb = groupoid_pullback(constant_map(ctx.point, ctx.square, (x, y)).strict(), ev)
        red = reduced_based_paths(ctx, x, y)
        return BasedGroupoids(kind, pb, red, are_equivalent(pb.groupoid, red))
    if kind == "omega_x":
        pb = groupoid_pullback(constant_map(ctx.point, ctx.square, (x, x)).strict(), ev)
        red = reduced_based_paths(ctx, x, x)
        loops = reduced_loop_groupoid(ctx)
        ev0 = EquivariantMap(loops, ctx.space, {g: g for g in ctx.group.elements},
                             {o: o[0].samples[0] for o in loops.objects})
        alt = groupoid_pullback(constant_map(ctx.point, ctx.space, x).strict(), ev0.strict())
        return BasedGroupoids(kind, pb, red, are_equivalent(pb.groupoid, red),
                              alt, are_equivalent(alt.groupoid, pb.groupoid))
    if kind == "path_x":
        G = ctx.group
        inc = EquivariantMap(ctx.space, ctx.square, {g: (G.identity, g) for g in G.elements},
                             {z: (x, z) for z in ctx.space.objects})
        pb = groupoid_pullback(inc.strict(), ev)
        red = reduced_path_space(ctx, x)
        return BasedGroupoids(kind, pb, red, are_equivalent(pb.groupoid, red))
    raise InvalidStructure(f"unknown based groupoid kind {kind!r}")


def reduce_based_object(G, act_path, beta: DiscretePath, h, l) -> tuple:
    """(β, h, l) with β(0) = h·x, β(T) = l·y  ↦  (h^-1 β, h^-1 l) in P_{x,y}."""
    hi = G.inv(h)
    return (act_path(hi, beta), G.mul(hi, l))


def check_based_action_trivial(ctx: PathContext, x, y) -> list[str]:
    """Every k moves (β, h, l) to an object with the same reduced form."""
    G = ctx.group
    pact = ctx.paths.action
    errs = []
    for (a, k) in reduced_based_paths(ctx, x, y).objects:
        obj = (a, G.identity, k)
        base = reduce_based_object(G, pact, *obj)
        if base != (a, k):
            errs.append(f"reduction does not fix {render((a, k))}")
        for g in G.elements:
            moved = (pact(g, a), g, G.mul(g, k))
            if reduce_based_object(G, pact, *moved) != base:
                errs.append(f"{g!r} moves the reduced object {render((a, k))}")
    return errs


def trivial_isotropy(gpd: FiniteGroupoid) -> bool:
    return all(len(gpd.hom(x, x)) == 1 for x in gpd.objects)


def path_loop_morphism(ctx: PathContext, x) -> StrictMorphism:
    """p_1 : P_x → G⋉X, projecting to the path and evaluating at its end."""
    px = based_groupoid(ctx, "path_x", x).pullback
    return px.pi2.then(endpoint_map(ctx, 1).strict())


def omega_via_path_loop(ctx: PathContext, x, y) -> tuple[PullbackResult, EquivalenceCertificate]:
    """Ω_{x,y} as the pullback of p_1 along y, compared with the direct construction."""
    p1 = path_loop_morphism(ctx, x)
    pb = groupoid_pullback(constant_map(ctx.point, ctx.space, y).strict(), p1)
    direct = reduced_based_paths(ctx, x, y)
    return pb, are_equivalent(pb.groupoid, direct)


def path_space_graph_action(ctx: PathContext, x) -> GraphAction:
    """The graph on the reduced path space P: (α, g, w) ~ (β, g, v) when α, β are
    pointwise adjacent-or-equal and w, v are adjacent-or-equal."""
    red = reduced_path_space(ctx, x)
    g = ctx.gaction.graph

    def close(u, v):
        return u == v or g.adjacent(u, v)

    pts = red.objects
    edges = set()
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if p[1] == q[1] and close(p[2], q[2]) and all(close(u, v) for u, v in zip(p[0].samples, q[0].samples)):
                edges.add(frozenset((p, q)))
    return GraphAction(SpaceGraph(pts, frozenset(edges)), red.action)
