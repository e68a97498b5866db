"""Equivariant natural transformations, homotopies of equivariant maps, the
contraction of path spaces, and verification of fibration lifts."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidStructure
from .groups import is_homomorphism
from .labels import render
from .loopbase import PathContext, constant_paths_map, endpoint_map
from .morphism import (EquivariantMap, NaturalTransformation, StrictMorphism,
                       is_essential_equivalence, natural_transformation_exists)
from .space import DiscretePath, PathSpace, SpaceGraph


@dataclass
class EquivariantTransformation:
    """γ: Z → G with γ(z)·f(z) = g(z) and γ(k z) = ψ(k) γ(z) φ(k)^-1."""

    gamma: dict
    constant: object | None  # the common value when γ is constant

    def to_json(self):
        return {"constant": self.constant, "values": {render(z): h for z, h in self.gamma.items()}}


def check_equivariant_transformation(f: EquivariantMap, g: EquivariantMap, gamma: Mapping,
                                     graph: SpaceGraph | None = None) -> list[str]:
    G = f.target.group
    Z = f.source.action
    X = f.target.action
    errs = []
    for z in Z.carrier:
        if gamma.get(z) not in G:
            errs.append(f"no value at {z!r}")
            continue
        if X(gamma[z], f(z)) != g(z):
            errs.append(f"γ({z!r})·f({z!r}) != g({z!r})")
    if errs:
        return errs
    for k in f.source.group.elements:
        for z in Z.carrier:
            want = G.prod(g.hom[k], gamma[z], G.inv(f.hom[k]))
            if gamma[Z(k, z)] != want:
                errs.append(f"naturality fails at ({k!r},{z!r})")
    if graph is not None:
        for e in graph.edges:
            u, v = tuple(e)
            if gamma[u] != gamma[v]:
                errs.append(f"γ is not locally constant along {render(u)}-{render(v)}")
    return errs


def equivariant_nt_exists(f: EquivariantMap, g: EquivariantMap,
                          graph: SpaceGraph | None = None) -> EquivariantTransformation | None:
    """Search for γ component by component.

    When ``graph`` (a graph on the source carrier) is given, γ must also be
    constant along its edges, the discrete counterpart of continuity.
    """
    if f.source is not g.source and f.source != g.source:
        raise InvalidStructure("maps have different sources")
    if f.target.action != g.target.action:
        raise InvalidStructure("maps have different targets")
    G = f.target.group
    K = f.source.group
    Z = f.source.action
    X = f.target.action
    nbrs = {z: () for z in Z.carrier}
    if graph is not None:
        nbrs = {z: graph.neighbors(z) for z in Z.carrier}
    gamma: dict = {}
    done: set = set()
    for z0 in Z.carrier:
        if z0 in done:
            continue
        # collect the component of z0
        comp = [z0]
        seen = {z0}
        todo = deque([z0])
        while todo:
            z = todo.popleft()
            for y in [Z(k, z) for k in K.elements] + list(nbrs[z]):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    todo.append(y)
        done |= seen
        found = None
        for h in G.elements:
            if X(h, f(z0)) != g(z0):
                continue
            t = {z0: h}
            todo = deque([z0])
            ok = True
            while todo and ok:
                z = todo.popleft()
                step = [(Z(k, z), G.prod(g.hom[k], t[z], G.inv(f.hom[k]))) for k in K.elements]
                step += [(y, t[z]) for y in nbrs[z]]
                for y, val in step:
                    if y in t:
                        if t[y] != val:
                            ok = False
                            break
                    else:
                        t[y] = val
                        todo.append(y)
            if ok and all(X(t[z], f(z)) == g(z) for z in comp):
                found = t
                break
        if found is None:
            return None
        gamma.update(found)
    values = set(gamma.values())
    return EquivariantTransformation(gamma, next(iter(values)) if len(values) == 1 else None)


def is_connected(graph: SpaceGraph) -> bool:
    vs = graph.vertices
    if not vs:
        return True
    seen = {vs[0]}
    todo = [vs[0]]
    while todo:
        v = todo.pop()
        for w in graph.neighbors(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(vs)


def connected_case_report(f: EquivariantMap, g: EquivariantMap, graph: SpaceGraph) -> dict:
    """On a connected carrier a continuous γ is a constant h with g = h f and
    ψ(k) = h φ(k) h^-1; this checks both facts against the search result."""
    res = equivariant_nt_exists(f, g, graph)
    out = {"connected": is_connected(graph), "exists": res is not None}
    if res is None:
        return out
    out["constant"] = res.constant
    if out["connected"]:
        h = res.constant
        G = f.target.group
        X = f.target.action
        out["constant_ok"] = h is not None
        if h is not None:
            out["translate_ok"] = all(g(z) == X(h, f(z)) for z in f.source.objects)
            out["conjugate_ok"] = all(g.hom[k] == G.conj(h, f.hom[k]) for k in f.source.group.elements)
    return out


@dataclass
class HomotopyWitness:
    """H: K⋉Z → G⋉X^I with end transformations ev_0 H ⇒ f and ev_1 H ⇒ g."""

    hom: dict                 # K → G
    paths: dict               # z ↦ path in X
    gamma0: dict              # γ0(z)·H(z)(0) = f(z)
    gamma1: dict              # γ1(z)·H(z)(T) = g(z)


def check_homotopy(f: EquivariantMap, g: EquivariantMap, w: HomotopyWitness, graph, T: int) -> list[str]:
    """Verify a strict homotopy witness; ``graph`` supplies adjacency on X."""
    K, G = f.source.group, f.target.group
    Z, X = f.source.action, f.target.action
    errs = []
    if set(w.hom) != set(K.elements) or not is_homomorphism(K, G, w.hom):
        errs.append("H does not carry a group homomorphism")
        return errs
    carrier = set(X.carrier)
    for z in Z.carrier:
        p = w.paths.get(z)
        if not isinstance(p, DiscretePath) or p.start != 0 or p.end != T:
            errs.append(f"H({render(z)}) is not a path on the grid 0..{T}")
        elif not all(v in carrier for v in p.samples) or not all(
                a == b or graph.adjacent(a, b) for a, b in zip(p.samples, p.samples[1:])):
            errs.append(f"H({render(z)}) is not a path in the space")
    if errs:
        return errs
    for k in K.elements:
        for z in Z.carrier:
            moved = tuple(X(w.hom[k], v) for v in w.paths[z].samples)
            if w.paths[Z(k, z)].samples != moved:
                errs.append(f"H is not equivariant at ({k!r},{render(z)})")
    for name, end, gamma, target in (("start", 0, w.gamma0, f), ("end", -1, w.gamma1, g)):
        for z in Z.carrier:
            c = gamma.get(z)
            if c not in G or X(c, w.paths[z].samples[end]) != target(z):
                errs.append(f"{name} transformation fails at {render(z)}")
                continue
            for k in K.elements:
                if gamma[Z(k, z)] != G.prod(target.hom[k], c, G.inv(w.hom[k])):
                    errs.append(f"{name} transformation is not natural at ({k!r},{render(z)})")
    return errs


def constant_homotopy(f: EquivariantMap, g: EquivariantMap, T: int) -> HomotopyWitness | None:
    """The witness H = i∘f for maps related by an equivariant transformation."""
    res = equivariant_nt_exists(f, g)
    if res is None:
        return None
    e = f.target.group.identity
    return HomotopyWitness(dict(f.hom), {z: DiscretePath((f(z),) * (T + 1)) for z in f.source.objects},
                           {z: e for z in f.source.objects}, dict(res.gamma))


@dataclass
class ContractionResult:
    stages: dict              # α ↦ path of paths (λ_0, ..., λ_T)
    witness: HomotopyWitness
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def contraction_stage(alpha: DiscretePath, s: int) -> DiscretePath:
    """λ_s(i) = α(s + ⌊i (T - s) / T⌋)"""
    T = len(alpha) - 1
    if T == 0:
        return alpha
    return DiscretePath([alpha.samples[s + (i * (T - s)) // T] for i in range(T + 1)])


def contraction_homotopy(ctx: PathContext) -> ContractionResult:
    """Homotopy from the identity of G⋉X^I to α ↦ constant path at α(T)."""
    T = ctx.T
    paths = ctx.paths
    G = ctx.group
    stages = {a: DiscretePath([contraction_stage(a, s) for s in range(T + 1)]) for a in paths.objects}
    e = G.identity
    ident = EquivariantMap.identity(paths)
    collapse = endpoint_map(ctx, 1).then(constant_paths_map(ctx))
    w = HomotopyWitness({g: g for g in G.elements}, stages, {a: e for a in paths.objects},
                        {a: e for a in paths.objects})
    errs = []
    graph = ctx.gaction.graph
    for a, lam in stages.items():
        for s, stage in enumerate(lam.samples):
            if not stage.is_valid_in(graph) or len(stage) != T + 1:
                errs.append(f"stage {s} of {render(a)} is not a path")
        if lam.samples[0] != a:
            errs.append(f"stage 0 of {render(a)} differs from the path")
        if lam.samples[-1].samples != (a.samples[-1],) * (T + 1):
            errs.append(f"last stage of {render(a)} is not constant at the end point")
    errs += check_homotopy(ident, collapse, w, PathSpace(graph, T), T)
    return ContractionResult(stages, w, errs)


def _two_cell(a: StrictMorphism, b: StrictMorphism, given: NaturalTransformation | None):
    if given is not None:
        if given.phi.obj_map != a.obj_map or given.psi.obj_map != b.obj_map:
            return False, "supplied transformation is between different functors"
        errs = given.check()
        return not errs, "; ".join(errs[:3])
    found = natural_transformation_exists(a, b)
    return found is not None, "" if found is not None else "no natural transformation exists"


@dataclass
class SpanHomotopy:
    """Data witnessing (σ, f) ≃ (τ, g) for spans with essential-equivalence legs σ, τ."""

    eps: StrictMorphism   # K' → base, essential equivalence
    H: StrictMorphism     # K' → G⋉X^I
    u0: StrictMorphism
    v0: StrictMorphism
    u1: StrictMorphism
    v1: StrictMorphism
    cells: dict = field(default_factory=dict)


def check_span_homotopy(sigma: StrictMorphism, f: StrictMorphism, tau: StrictMorphism, g: StrictMorphism,
                        w: SpanHomotopy, ev0: StrictMorphism, ev1: StrictMorphism) -> dict:
    """f v0 ~ ev0 H u0, g v1 ~ ev1 H u1, ε u0 ~ σ v0, ε u1 ~ τ v1, legs essential."""
    conds = {
        "start": (w.v0.then(f), w.u0.then(w.H).then(ev0)),
        "end": (w.v1.then(g), w.u1.then(w.H).then(ev1)),
        "start_base": (w.u0.then(w.eps), w.v0.then(sigma)),
        "end_base": (w.u1.then(w.eps), w.v1.then(tau)),
    }
    out = {}
    for name, (a, b) in conds.items():
        ok, why = _two_cell(a, b, w.cells.get(name))
        out[name] = {"ok": ok, "detail": why}
    for name, m in (("eps", w.eps), ("u0", w.u0), ("v0", w.v0), ("u1", w.u1), ("v1", w.v1)):
        out[f"{name}_essential"] = {"ok": is_essential_equivalence(m).ok, "detail": ""}
    out["ok"] = all(v["ok"] for v in out.values())
    return out


@dataclass
class LiftingProblem:
    f: StrictMorphism       # E → B
    Omega: StrictMorphism   # 𝓛 → L⋉U
    omega: StrictMorphism   # ℓ → L⋉U
    K: StrictMorphism       # 𝓛 → B^I
    k: StrictMorphism       # ℓ → E
    eta: StrictMorphism     # M → 𝓛
    nu: StrictMorphism      # M → ℓ


@dataclass
class LiftCandidate:
    Omega_t: StrictMorphism  # 𝓛~ → L⋉U
    K_t: StrictMorphism      # 𝓛~ → E^I
    eta1: StrictMorphism     # M' → 𝓛~
    nu1: StrictMorphism      # M' → ℓ
    eta2: StrictMorphism     # M'' → 𝓛~
    nu2: StrictMorphism      # M'' → 𝓛
    cells: dict = field(default_factory=dict)


def verify_fibration_lift(problem: LiftingProblem, lift: LiftCandidate, f_paths: StrictMorphism,
                          ev0_E: StrictMorphism, ev0_B: StrictMorphism) -> dict:
    """Check a proposed lift for a lifting problem against a strict map f.

    ``f_paths`` is f_*: E^I → B^I, and ``ev0_E``, ``ev0_B`` evaluate paths at
    their start.  Two-cells given in ``lift.cells`` are checked as supplied;
    missing ones are searched for.
    """
    p, c = problem, lift
    out = {}
    hyp = {
        "problem_square": (p.eta.then(p.Omega), p.nu.then(p.omega)),
        "problem_start": (p.eta.then(p.K).then(ev0_B), p.nu.then(p.k).then(p.f)),
    }
    for name, (a, b) in hyp.items():
        ok, why = _two_cell(a, b, None)
        out[name] = {"ok": ok, "detail": why}
    conds = {
        "cover_small": (c.eta1.then(c.Omega_t), c.nu1.then(p.omega)),
        "cover_large": (c.eta2.then(c.Omega_t), c.nu2.then(p.Omega)),
        "lift_start": (c.eta1.then(c.K_t).then(ev0_E), c.nu1.then(p.k)),
        "lift_image": (c.eta2.then(c.K_t).then(f_paths), c.nu2.then(p.K)),
    }
    for name, (a, b) in conds.items():
        ok, why = _two_cell(a, b, c.cells.get(name))
        out[name] = {"ok": ok, "detail": why}
    legs = {"eta": p.eta, "nu": p.nu, "omega": p.omega, "Omega": p.Omega, "eta1": c.eta1, "nu1": c.nu1,
            "eta2": c.eta2, "nu2": c.nu2, "Omega_t": c.Omega_t}
    for name, m in legs.items():
        errs = m.check()
        ok = not errs and is_essential_equivalence(m).ok
        out[f"{name}_essential"] = {"ok": ok, "detail": "; ".join(errs[:2])}
    out["ok"] = all(v["ok"] for v in out.values())
    return out
