"""Paths in a translation groupoid: sequences of graph paths glued by group
elements, their equivalence, and comparison with honest paths."""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContextMismatch, InvalidStructure, LiftError
from .groupoid import FiniteGroupoid, TranslationGroupoid, translation_groupoid
from .groups import GroupAction, make_action
from .labels import label_key, render, sorted_labels, to_json
from .morphism import EquivariantMap, StrictMorphism, is_essential_equivalence
from .space import (DiscretePath, GraphAction, GridSubdivision, act_on_path, concat,
                    enumerate_paths, free_path_translation_groupoid, interval_groupoid)


class GPath:
    """Pieces α_1..α_n on consecutive grid intervals with connectors k_1..k_{n-1}
    such that k_i·α_i(c_i) = α_{i+1}(c_i).

    Equality and hashing ignore the graph action; operations that combine two
    paths check that the actions agree.
    """

    __slots__ = ("action", "pieces", "connectors", "T", "_hash", "_cache")

    def __init__(self, action: GraphAction, pieces: Sequence[DiscretePath], connectors: Sequence = ()):
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "pieces", tuple(pieces))
        object.__setattr__(self, "connectors", tuple(connectors))
        object.__setattr__(self, "_hash", hash((self.pieces, self.connectors)))
        object.__setattr__(self, "_cache", {})
        if len(self.connectors) != len(self.pieces) - 1 or not self.pieces:
            raise InvalidStructure("need n pieces and n-1 connectors")
        object.__setattr__(self, "T", self.pieces[-1].end)

    def __setattr__(self, name, value):
        raise AttributeError("GPath is immutable")

    @classmethod
    def from_cuts(cls, action: GraphAction, cuts: Sequence[int], pieces: Sequence[Sequence],
                  connectors: Sequence = ()) -> "GPath":
        if len(cuts) != len(pieces) + 1:
            raise InvalidStructure("need one more cut than pieces")
        return cls(action, [DiscretePath(s, cuts[i]) for i, s in enumerate(pieces)], connectors)

    @classmethod
    def single(cls, action: GraphAction, path: DiscretePath) -> "GPath":
        return cls(action, [path.shifted(0)], ())

    def __eq__(self, other):
        if not isinstance(other, GPath):
            return NotImplemented
        return self._hash == other._hash and self.pieces == other.pieces and self.connectors == other.connectors

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = [repr(self.pieces[0].samples)]
        for k, p in zip(self.connectors, self.pieces[1:]):
            parts += [repr(k), repr(p.samples)]
        return f"GPath(cuts={self.cuts}, {' | '.join(parts)})"

    @property
    def cuts(self) -> tuple:
        return (self.pieces[0].start,) + tuple(p.end for p in self.pieces)

    @property
    def subdivision(self) -> GridSubdivision:
        return GridSubdivision(self.T, self.cuts)

    @property
    def group(self):
        return self.action.group

    def check(self) -> list[str]:
        errs = []
        if self.pieces[0].start != 0:
            errs.append("first piece must start at 0")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.end != b.start:
                errs.append(f"pieces [{a.start},{a.end}] and [{b.start},{b.end}] are not consecutive")
        graph = self.action.graph
        for i, p in enumerate(self.pieces):
            if not p.is_valid_in(graph):
                errs.append(f"piece {i} is not a path in the graph")
        act = self.action.action
        for i, k in enumerate(self.connectors):
            if k not in self.group:
                errs.append(f"connector {k!r} is not a group element")
                continue
            if not errs and act(k, self.pieces[i].samples[-1]) != self.pieces[i + 1].samples[0]:
                errs.append(f"connector {i} does not carry the end of piece {i} to the start of piece {i + 1}")
        return errs

    def validate(self) -> "GPath":
        errs = self.check()
        if errs:
            raise InvalidStructure("; ".join(errs))
        return self

    def to_json(self):
        return {"cuts": list(self.cuts), "pieces": [p.to_json() for p in self.pieces],
                "connectors": [to_json(k) for k in self.connectors]}

    def render(self) -> str:
        return repr(self)

    def sort_key(self):
        return (self.cuts, tuple(p.sort_key() for p in self.pieces),
                tuple(label_key(k) for k in self.connectors))


def _same_context(a: GPath, b: GPath) -> None:
    if not (a.action is b.action or a.action == b.action):
        raise ContextMismatch("G-paths live over different graph actions")
    if a.T != b.T:
        raise ContextMismatch(f"G-paths have different grids ({a.T} vs {b.T})")


def gpath_act(gs: Sequence, p: GPath) -> GPath:
    """Apply the arrow (g_1..g_n): pieces become g_i·α_i, connectors g_{i+1} k_i g_i^-1."""
    if len(gs) != len(p.pieces):
        raise InvalidStructure("arrow length differs from the number of pieces")
    G = p.group
    act = p.action.action
    pieces = [act_on_path(act, g, a) for g, a in zip(gs, p.pieces)]
    conns = [G.prod(gs[i + 1], k, G.inv(gs[i])) for i, k in enumerate(p.connectors)]
    return GPath(p.action, pieces, conns)


def refine(p: GPath, cut: int, i: int) -> GPath:
    """Split piece ``i`` (0-based) at ``cut``, gluing the halves with the identity."""
    piece = p.pieces[i]
    if not piece.start <= cut <= piece.end:
        raise InvalidStructure(f"cut {cut} is outside piece {i} = [{piece.start}, {piece.end}]")
    left, right = piece.restrict(piece.start, cut), piece.restrict(cut, piece.end)
    pieces = p.pieces[:i] + (left, right) + p.pieces[i + 1:]
    conns = p.connectors[:i] + (p.group.identity,) + p.connectors[i:]
    return GPath(p.action, pieces, conns)


def colimit_normal_form(p: GPath) -> GPath:
    """Merge every cut whose connector is the identity."""
    e = p.group.identity
    pieces = [p.pieces[0]]
    conns = []
    for k, nxt in zip(p.connectors, p.pieces[1:]):
        if k == e:
            pieces[-1] = concat(pieces[-1], nxt)
        else:
            pieces.append(nxt)
            conns.append(k)
    return GPath(p.action, pieces, conns)


def refine_to(p: GPath, cuts: Sequence[int]) -> GPath:
    """Refine ``p`` with identity connectors until its cut multiset is ``cuts``."""
    want = Counter(cuts)
    have = Counter(p.cuts)
    if any(have[v] > want[v] for v in have):
        raise InvalidStructure(f"cuts {tuple(cuts)} do not refine {p.cuts}")
    for v in sorted(want):
        while have[v] < want[v]:
            inside = [i for i, q in enumerate(p.pieces) if q.start < v < q.end]
            starting = [i for i, q in enumerate(p.pieces) if q.start == v]
            ending = [i for i, q in enumerate(p.pieces) if q.end == v]
            i = (inside or starting or ending[-1:])[0]
            p = refine(p, v, i)
            have[v] += 1
    return p


def orbit_signature(p: GPath) -> tuple:
    """The orbit of the sample at every grid point.

    Any arrow between G-paths moves each sample inside its orbit, so equal
    signatures are necessary for equivalence.
    """
    sig = p._cache.get("signature")
    if sig is None:
        orb = p.action.action.orbit_index
        vals = [orb[v] for v in p.pieces[0].samples]
        for q in p.pieces[1:]:
            vals.extend(orb[v] for v in q.samples[1:])
        sig = tuple(vals)
        p._cache["signature"] = sig
    return sig


@dataclass
class DirectWitness:
    left: GPath   # refinement of the first path
    right: GPath  # refinement of the second path
    elements: tuple

    def check(self) -> bool:
        return gpath_act(self.elements, self.left) == self.right


def gpath_equivalent_direct(a: GPath, b: GPath) -> DirectWitness | None:
    """Search for an arrow between common refinements of ``a`` and ``b``.

    Both paths are refined to the union of their cut multisets; every tuple of
    group elements fixing the pieces pointwise is then tried in label order.
    """
    _same_context(a, b)
    if orbit_signature(a) != orbit_signature(b):
        return None
    ca, cb = Counter(a.cuts), Counter(b.cuts)
    union = sorted((ca | cb).elements())
    a2, b2 = refine_to(a, union), refine_to(b, union)
    G = a.group
    perms = a.action.action.perms
    cands = []
    for x, y in zip(a2.pieces, b2.pieces):
        c = [g for g in G.elements if all(perms[g][u] == v for u, v in zip(x.samples, y.samples))]
        if not c:
            return None
        cands.append(c)
    for gs in itertools.product(*cands):
        if all(G.prod(gs[i + 1], k, G.inv(gs[i])) == b2.connectors[i] for i, k in enumerate(a2.connectors)):
            return DirectWitness(a2, b2, gs)
    return None


def chi(p: GPath) -> DiscretePath:
    """The honest path with c(r) = (k_{i-1}...k_1)^-1 α_i(r) on piece i."""
    c = p._cache.get("chi")
    if c is None:
        G = p.group
        perms = p.action.action.perms
        prefix = G.identity
        samples = [perms[G.identity][v] for v in p.pieces[0].samples]
        for k, piece in zip(p.connectors, p.pieces[1:]):
            prefix = G.mul(k, prefix)
            back = perms[G.inv(prefix)]
            vals = [back[v] for v in piece.samples]
            if vals[0] != samples[-1]:
                raise InvalidStructure("connector mismatch while straightening")
            samples.extend(vals[1:])
        c = DiscretePath(samples)
        p._cache["chi"] = c
    return c


def chi_inverse(path: DiscretePath, action: GraphAction) -> GPath:
    return GPath(action, [path.shifted(0)], ())


def chi_witness(p: GPath) -> tuple:
    """The arrow (e, k_1^-1, (k_2 k_1)^-1, ...) from ``p`` to a refinement of chi_inverse(chi(p))."""
    G = p.group
    prefix = G.identity
    out = [G.identity]
    for k in p.connectors:
        prefix = G.mul(k, prefix)
        out.append(G.inv(prefix))
    return tuple(out)


def iso_check(a: GPath, b: GPath):
    """An element g with g·chi(a) = chi(b), or None."""
    _same_context(a, b)
    ca, cb = chi(a).samples, chi(b).samples
    perms = a.action.action.perms
    first = cb[0]
    for g in a.group.elements:
        pg = perms[g]
        if pg[ca[0]] != first:
            continue
        if all(pg[u] == v for u, v in zip(ca, cb)):
            return g
    return None


@dataclass(frozen=True)
class MultipleGPath:
    """A path of G-orbits given by its branch through the identity.

    The branch through g is σ(g, r) = g^-1 · e_branch(r).
    """

    action: GraphAction = field(compare=False, repr=False)
    e_branch: DiscretePath

    def sigma(self, g, r: int):
        act = self.action.action
        return act(act.group.inv(g), self.e_branch.at(r))

    def branch(self, g) -> DiscretePath:
        return act_on_path(self.action.action, self.action.group.inv(g), self.e_branch)

    def check(self) -> list[str]:
        errs = []
        G = self.action.group
        act = self.action.action
        for g in G.elements:
            if not self.branch(g).is_valid_in(self.action.graph):
                errs.append(f"branch {g!r} is not a path")
        for h in G.elements:
            for g in G.elements:
                gh = G.mul(g, G.inv(h))
                for r in range(self.e_branch.start, self.e_branch.end + 1):
                    if self.sigma(gh, r) != act(h, self.sigma(g, r)):
                        errs.append(f"equivariance fails at ({h!r},{g!r},{r})")
        return errs


def xi(m: MultipleGPath) -> DiscretePath:
    return m.e_branch


def xi_inverse(path: DiscretePath, action: GraphAction) -> MultipleGPath:
    return MultipleGPath(action, path)


@dataclass
class YAlpha:
    """The G-space attached to a G-path together with its comparison maps."""

    gpath: GPath
    groupoid: TranslationGroupoid     # G ⋉ Y_α
    class_of: dict                    # (g, (r, i)) -> class label
    nu: StrictMorphism                # thin groupoid -> G ⋉ Y_α
    gamma: EquivariantMap             # G ⋉ Y_α -> G ⋉ (G × {0..T})
    gamma_inverse: dict               # (g, r) -> class label
    to_space: EquivariantMap          # G ⋉ Y_α -> G ⋉ X, [g,(r,i)] -> g^-1 α_i(r)


def build_Y_alpha(p: GPath) -> YAlpha:
    G = p.group
    act = p.action.action
    thin = interval_groupoid(p.subdivision)
    n = len(p.pieces)
    cuts = p.cuts
    parent = {(g, o): (g, o) for g in G.elements for o in thin.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(1, n):
        k = p.connectors[i - 1]
        c = cuts[i]
        for g in G.elements:
            u, v = find((g, (c, i + 1))), find((G.mul(G.inv(k), g), (c, i)))
            if u != v:
                parent[u] = v
    members: dict = {}
    for x in parent:
        members.setdefault(find(x), []).append(x)
    class_of = {}
    for ms in members.values():
        lab = min(ms, key=label_key)
        for x in ms:
            class_of[x] = lab
    classes = sorted_labels(set(class_of.values()))

    def act_y(h, c):
        g, o = c
        return class_of[(G.mul(g, G.inv(h)), o)]

    ygpd = translation_groupoid(make_action(G, classes, act_y), validate=False)

    prefix = [G.identity]  # prefix[i-1] = k_{i-1} ... k_1
    for k in p.connectors:
        prefix.append(G.mul(k, prefix[-1]))
    e = G.identity
    nu_obj = {o: class_of[(e, o)] for o in thin.objects}
    nu_arr = {}
    for a in thin.arrows:
        (r, i), (_, j) = a
        nu_arr[a] = (G.mul(prefix[j - 1], G.inv(prefix[i - 1])), class_of[(e, (r, i))])
    nu = StrictMorphism(thin, ygpd, nu_obj, nu_arr)

    grid_points = [(g, r) for g in G.elements for r in range(p.T + 1)]
    grid_gpd = translation_groupoid(make_action(G, grid_points, lambda h, gr: (G.mul(gr[0], G.inv(h)), gr[1])),
                                    validate=False)
    gamma_map = {}
    for c in classes:
        g, (r, i) = c
        gamma_map[c] = (G.mul(G.inv(prefix[i - 1]), g), r)
    gamma = EquivariantMap(ygpd, grid_gpd, {g: g for g in G.elements}, gamma_map)
    piece_of = {}
    for i in range(n, 0, -1):
        for r in range(cuts[i - 1], cuts[i] + 1):
            piece_of[r] = i
    gamma_inv = {(h, r): class_of[(G.mul(prefix[piece_of[r] - 1], h), (r, piece_of[r]))]
                 for (h, r) in grid_points}

    space = p.action.groupoid
    to_space = EquivariantMap(ygpd, space, {g: g for g in G.elements},
                              {c: act(G.inv(c[0]), p.pieces[c[1][1] - 1].at(c[1][0])) for c in classes})
    return YAlpha(p, ygpd, class_of, nu, gamma, gamma_inv, to_space)


def check_Y_alpha(y: YAlpha) -> list[str]:
    """Size, ν an essential equivalence, γ an equivariant bijection with inverse."""
    errs = []
    p = y.gpath
    expected = len(p.group) * (p.T + 1)
    if len(y.groupoid.objects) != expected:
        errs.append(f"|Y| = {len(y.groupoid.objects)}, expected {expected}")
    errs += [f"nu: {e}" for e in y.nu.check()]
    rep = is_essential_equivalence(y.nu)
    if not rep.ok:
        errs.append("nu is not an essential equivalence")
    errs += [f"gamma: {e}" for e in y.gamma.check()]
    if len(set(y.gamma.carrier_map.values())) != len(y.gamma.target.objects) or \
            len(y.gamma.carrier_map) != len(y.gamma.target.objects):
        errs.append("gamma is not a bijection")
    for c, gr in y.gamma.carrier_map.items():
        if y.gamma_inverse.get(gr) != c:
            errs.append(f"gamma_inverse does not invert gamma at {c!r}")
            break
    errs += [f"to_space: {e}" for e in y.to_space.check()]
    return errs


def map_gpath(f: EquivariantMap, p: GPath, target: GraphAction) -> GPath:
    """Push a G-path forward along φ ⋉ f: pieces f∘α_i, connectors φ(k_i)."""
    pieces = [DiscretePath([f(v) for v in q.samples], q.start) for q in p.pieces]
    out = GPath(target, pieces, [f.hom[k] for k in p.connectors])
    for q in out.pieces:
        if not q.is_valid_in(target.graph):
            raise InvalidStructure("the map does not send paths to paths")
    return out


def induced_map(f: EquivariantMap, source: GraphAction, target: GraphAction, T: int,
                source_paths: TranslationGroupoid | None = None,
                target_paths: TranslationGroupoid | None = None) -> EquivariantMap:
    """The map between path groupoids given by composing paths with f."""
    if f.source.action != source.action or f.target.action != target.action:
        raise ContextMismatch("map does not match the given graph actions")
    sp = source_paths or free_path_translation_groupoid(source, T)
    tp = target_paths or free_path_translation_groupoid(target, T)
    tset = set(tp.objects)
    carrier = {}
    for a in sp.objects:
        img = DiscretePath([f(v) for v in a.samples])
        if img not in tset:
            raise InvalidStructure(f"image of {a!r} is not a path in the target graph")
        carrier[a] = img
    return EquivariantMap(sp, tp, dict(f.hom), carrier)


@dataclass
class LiftResult:
    gpath: GPath          # the lifted G-path in the source space
    witness: tuple        # arrow from the pushed-forward lift to ``target``
    target: GPath         # refinement of the input path with unit-step pieces


def _preimage_arrow(f: EquivariantMap, x, y, h):
    """The unique source element g with g·x = y and φ(g) = h."""
    act = f.source.action
    found = [g for g in f.source.group.elements if act(g, x) == y and f.hom[g] == h]
    if len(found) != 1:
        raise LiftError(f"{len(found)} arrows {x!r} -> {y!r} over {h!r}; the map is not fully faithful")
    return found[0]


def lift_gpath(f: EquivariantMap, gamma: GPath, source: GraphAction) -> LiftResult:
    """Lift a G-path along an essential equivalence.

    Each unit step of ``gamma`` is lifted to an edge (or stay) x0 -> x1 with
    f(x0) = h·y0 and f(x1) = h·y1, taking the first choice in label order.
    Connectors come from full faithfulness.  Raises ``LiftError`` when a
    step has no lift.
    """
    if not is_essential_equivalence(f.strict()).ok:
        raise LiftError("map is not an essential equivalence")
    H = gamma.group
    X, Y = f.source.action, f.target.action
    graph = source.graph
    pieces, hs, conns, tpieces, tconns = [], [], [], [], []
    prev = None  # (x_end, h) of the last lifted piece
    for idx, q in enumerate(gamma.pieces):
        k = H.identity if idx == 0 else gamma.connectors[idx - 1]
        if len(q) == 1:
            steps = [(q.start, q.samples[0], None)]
        else:
            steps = [(q.start + j, q.samples[j], q.samples[j + 1]) for j in range(len(q) - 1)]
        for j, (r, y0, y1) in enumerate(steps):
            lifted = None
            for x0 in X.carrier:
                for x1 in ((x0,) if y1 is None else (x0,) + graph.neighbors(x0)):
                    for h in H.elements:
                        if f(x0) == Y(h, y0) and (y1 is None or f(x1) == Y(h, y1)):
                            lifted = (x0, x1, h)
                            break
                    if lifted:
                        break
                if lifted:
                    break
            if lifted is None:
                raise LiftError(f"step {y0!r} -> {y1!r} at {r} has no lift")
            x0, x1, h = lifted
            piece = DiscretePath((x0,) if y1 is None else (x0, x1), r)
            tpieces.append(DiscretePath((y0,) if y1 is None else (y0, y1), r))
            if prev is not None:
                kk = k if j == 0 else H.identity
                tconns.append(kk)
                conns.append(_preimage_arrow(f, prev[0], x0, H.prod(h, kk, H.inv(prev[1]))))
            pieces.append(piece)
            hs.append(h)
            prev = (piece.samples[-1], h)
    lift = GPath(source, pieces, conns)
    target = GPath(gamma.action, tpieces, tconns)
    witness = tuple(H.inv(h) for h in hs)
    return LiftResult(lift, witness, target)


def enumerate_gpaths(action: GraphAction, T: int, max_pieces: int = 2) -> list[GPath]:
    """All G-paths with one piece, and (if allowed) all with two pieces."""
    if max_pieces not in (1, 2):
        raise InvalidStructure("only one or two pieces are supported")
    graph = action.graph
    by_len = {t: enumerate_paths(graph, t) for t in range(T + 1)}
    from_vertex = {t: {} for t in by_len}
    for t, ps in by_len.items():
        for p in ps:
            from_vertex[t].setdefault(p.samples[0], []).append(p)
    out = [GPath(action, [p]) for p in by_len[T]]
    if max_pieces == 2:
        act = action.action
        for c in range(T + 1):
            for a1 in by_len[c]:
                for k in action.group.elements:
                    start = act(k, a1.samples[-1])
                    for a2 in from_vertex[T - c][start]:
                        out.append(GPath(action, [a1, a2.shifted(c)], [k]))
    return out


def random_gpath(action: GraphAction, T: int, rng: random.Random, max_pieces: int = 4) -> GPath:
    graph = action.graph
    act = action.action
    G = action.group
    n = rng.randint(1, max_pieces)
    inner = sorted(rng.randint(0, T) for _ in range(n - 1))
    cuts = [0] + inner + [T]
    v = rng.choice(graph.vertices)
    pieces, conns = [], []
    for i in range(n):
        if i > 0:
            k = rng.choice(G.elements)
            conns.append(k)
            v = act(k, v)
        samples = [v]
        for _ in range(cuts[i], cuts[i + 1]):
            v = rng.choice((v,) + graph.neighbors(v))
            samples.append(v)
        pieces.append(DiscretePath(samples, cuts[i]))
    return GPath(action, pieces, conns)
