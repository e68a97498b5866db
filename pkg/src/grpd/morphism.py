"""Strict morphisms, equivariant maps, natural transformations, essential
equivalences and pullbacks of finite groupoids."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import InvalidStructure
from .groupoid import FiniteGroupoid, TranslationGroupoid, translation_groupoid
from .groups import FiniteGroup, GroupAction, direct_product, is_homomorphism
from .labels import label_key, render, sorted_labels


@dataclass(frozen=True, eq=False)
class StrictMorphism:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: Mapping = field(repr=False)
    arr_map: Mapping = field(repr=False)

    def __call__(self, x):
        return self.obj_map[x]

    def check(self) -> list[str]:
        s, t = self.source, self.target
        errs = []
        for x in s.objects:
            if self.obj_map.get(x) not in t.unit:
                errs.append(f"object {x!r} has no image")
        if errs:
            return errs
        for x in s.objects:
            if self.arr_map.get(s.unit[x]) != t.unit[self.obj_map[x]]:
                errs.append(f"unit of {x!r} not preserved")
        for a in s.arrows:
            fa = self.arr_map.get(a)
            if fa not in t.src:
                errs.append(f"arrow {a!r} has no image")
                continue
            if t.src[fa] != self.obj_map[s.src[a]] or t.tgt[fa] != self.obj_map[s.tgt[a]]:
                errs.append(f"arrow {a!r} is sent to an arrow with the wrong endpoints")
        if errs:
            return errs
        for (b, a), c in s.comp.items():
            if t.comp.get((self.arr_map[b], self.arr_map[a])) != self.arr_map[c]:
                errs.append(f"composition not preserved at ({b!r},{a!r})")
                if len(errs) > 20:
                    break
        return errs

    def validate(self) -> None:
        errs = self.check()
        if errs:
            raise InvalidStructure("; ".join(errs[:5]))

    def then(self, other: "StrictMorphism") -> "StrictMorphism":
        """other ∘ self"""
        return StrictMorphism(self.source, other.target,
                              {x: other.obj_map[y] for x, y in self.obj_map.items()},
                              {a: other.arr_map[b] for a, b in self.arr_map.items()})

    @staticmethod
    def identity(gpd: FiniteGroupoid) -> "StrictMorphism":
        return StrictMorphism(gpd, gpd, {x: x for x in gpd.objects}, {a: a for a in gpd.arrows})


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    """A map φ ⋉ f : K ⋉ Z → G ⋉ X with f(k·z) = φ(k)·f(z)."""

    source: TranslationGroupoid
    target: TranslationGroupoid
    hom: Mapping = field(repr=False)
    carrier_map: Mapping = field(repr=False)

    def __call__(self, z):
        return self.carrier_map[z]

    def check(self) -> list[str]:
        sg, tg = self.source.group, self.target.group
        sa, ta = self.source.action, self.target.action
        errs = []
        if set(self.hom) != set(sg.elements) or not set(self.hom.values()) <= set(tg.elements):
            return ["group map is not defined on the whole source group"]
        if not is_homomorphism(sg, tg, self.hom):
            errs.append("group map is not a homomorphism")
        tc = set(ta.carrier)
        for z in sa.carrier:
            if self.carrier_map.get(z) not in tc:
                errs.append(f"point {z!r} has no image in the target")
        if errs:
            return errs
        for k in sg.elements:
            for z in sa.carrier:
                if self.carrier_map[sa(k, z)] != ta(self.hom[k], self.carrier_map[z]):
                    errs.append(f"equivariance fails at ({k!r},{z!r})")
                    if len(errs) > 20:
                        return errs
        return errs

    def validate(self) -> None:
        errs = self.check()
        if errs:
            raise InvalidStructure("; ".join(errs[:5]))

    def strict(self) -> StrictMorphism:
        return StrictMorphism(self.source, self.target, dict(self.carrier_map),
                              {(k, z): (self.hom[k], self.carrier_map[z]) for k, z in self.source.arrows})

    def then(self, other: "EquivariantMap") -> "EquivariantMap":
        return EquivariantMap(self.source, other.target,
                              {k: other.hom[v] for k, v in self.hom.items()},
                              {z: other.carrier_map[v] for z, v in self.carrier_map.items()})

    @staticmethod
    def identity(gpd: TranslationGroupoid) -> "EquivariantMap":
        return EquivariantMap(gpd, gpd, {g: g for g in gpd.group.elements},
                              {x: x for x in gpd.objects})


@dataclass(frozen=True, eq=False)
class NaturalTransformation:
    """Components T(x): φ(x) → ψ(x) with ψ(h)∘T(x) = T(y)∘φ(h) for h: x → y."""

    phi: StrictMorphism
    psi: StrictMorphism
    component: Mapping = field(repr=False)

    def check(self) -> list[str]:
        src = self.phi.source
        tgt = self.phi.target
        errs = []
        for x in src.objects:
            c = self.component.get(x)
            if c not in tgt.src or tgt.src[c] != self.phi(x) or tgt.tgt[c] != self.psi(x):
                errs.append(f"component at {x!r} is not an arrow {self.phi(x)!r} -> {self.psi(x)!r}")
        if errs:
            return errs
        for h in src.arrows:
            x, y = src.src[h], src.tgt[h]
            left = tgt.comp[(self.psi.arr_map[h], self.component[x])]
            right = tgt.comp[(self.component[y], self.phi.arr_map[h])]
            if left != right:
                errs.append(f"naturality fails at arrow {h!r}")
                if len(errs) > 20:
                    break
        return errs

    def inverse(self) -> "NaturalTransformation":
        inv = self.phi.target.inv
        return NaturalTransformation(self.psi, self.phi, {x: inv[c] for x, c in self.component.items()})


def natural_transformation_exists(phi: StrictMorphism, psi: StrictMorphism) -> NaturalTransformation | None:
    """Search for a natural transformation φ ⇒ ψ.

    Per component of the source: try each candidate arrow at the
    representative, propagate along a spanning tree, then check every arrow.
    """
    src, tgt = phi.source, phi.target
    if psi.source is not src and psi.source != src:
        raise InvalidStructure("functors have different sources")
    if psi.target is not tgt and psi.target != tgt:
        raise InvalidStructure("functors have different targets")
    comp = tgt.comp
    result: dict = {}
    for members in src.components():
        rep = members[0]
        # spanning tree: (arrow from parent, child)
        tree = []
        seen = {rep}
        todo = deque([rep])
        while todo:
            x = todo.popleft()
            for h in src.arrows_from(x):
                y = src.tgt[h]
                if y not in seen:
                    seen.add(y)
                    tree.append((h, x, y))
                    todo.append(y)
        member_arrows = [h for x in members for h in src.arrows_from(x)]
        found = None
        for cand in tgt.hom(phi(rep), psi(rep)):
            t = {rep: cand}
            for h, x, y in tree:
                # T(y) = ψ(h) T(x) φ(h)^-1
                t[y] = comp[(comp[(psi.arr_map[h], t[x])], tgt.inv[phi.arr_map[h]])]
            if all(comp[(psi.arr_map[h], t[src.src[h]])] == comp[(t[src.tgt[h]], phi.arr_map[h])]
                   for h in member_arrows):
                found = t
                break
        if found is None:
            return None
        result.update(found)
    return NaturalTransformation(phi, psi, result)


@dataclass
class EssentialEquivalenceReport:
    fully_faithful: bool
    essentially_surjective: bool
    openness: str = "vacuous: finite discrete spaces"
    counterexamples: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def to_json(self):
        return {"essential_equivalence": self.ok, "fully_faithful": self.fully_faithful,
                "essentially_surjective": self.essentially_surjective,
                "openness": self.openness, "counterexamples": self.counterexamples[:10]}


def is_essential_equivalence(m: StrictMorphism) -> EssentialEquivalenceReport:
    """Full faithfulness and essential surjectivity, checked exhaustively."""
    src, tgt = m.source, m.target
    ce: list = []
    ff = True
    # map K(x,y) -> G(mx,my) must be a bijection for every pair of objects
    for x in src.objects:
        images: dict = {}
        for a in src.arrows_from(x):
            y = src.tgt[a]
            images.setdefault(y, set()).add(m.arr_map[a])
        mx = m(x)
        for y in src.objects:
            got = images.get(y, set())
            n_src = len(src.hom(x, y))
            want = len(tgt.hom(mx, m(y)))
            if len(got) != n_src or n_src != want:
                ff = False
                ce.append({"kind": "not fully faithful", "pair": [render(x), render(y)],
                           "source_arrows": n_src, "image_arrows": len(got), "target_arrows": want})
                if len(ce) > 10:
                    break
        if len(ce) > 10:
            break
    # s∘π1 : G1 ×t K0 → G0 surjective: every object receives an arrow into the image
    image = {}
    for z in src.objects:
        image.setdefault(m(z), z)
    witnesses = {}
    es = True
    reach_comp = {}
    for y, z in image.items():
        reach_comp.setdefault(tgt.component_of[y], (y, z))
    for y in tgt.objects:
        hit = reach_comp.get(tgt.component_of[y])
        if hit is None:
            es = False
            ce.append({"kind": "not essentially surjective", "object": render(y)})
            continue
        witnesses[y] = (tgt.hom(y, hit[0])[0], hit[1])
    return EssentialEquivalenceReport(ff, es, counterexamples=ce, witnesses=witnesses)


@dataclass
class PullbackResult:
    groupoid: FiniteGroupoid
    pi1: StrictMorphism
    pi2: StrictMorphism
    square: NaturalTransformation  # φ∘π2 ⇒ ψ∘π1


def groupoid_pullback(psi: StrictMorphism, phi: StrictMorphism) -> PullbackResult:
    """Weak pullback K ×_G L of ψ: K → G and φ: L → G.

    Objects are triples (k, g, l) with g: φ(l) → ψ(k).  An arrow (a, g, b)
    goes from (s a, ψ(a)^-1 g φ(b), s b) to (t a, g, t b).
    """
    G = psi.target
    if phi.target is not G and phi.target != G:
        raise InvalidStructure("pullback legs have different targets")
    K, L = psi.source, phi.source
    comp, inv = G.comp, G.inv
    objects = []
    for k in K.objects:
        pk = psi(k)
        for l in L.objects:
            for g in G.hom(phi(l), pk):
                objects.append((k, g, l))
    k_in: dict = {}
    for a in K.arrows:
        k_in.setdefault(K.tgt[a], []).append(a)
    l_in: dict = {}
    for b in L.arrows:
        l_in.setdefault(L.tgt[b], []).append(b)
    src, tgt, unit, inv_p = {}, {}, {}, {}
    arrows = []
    for (k, g, l) in objects:
        unit[(k, g, l)] = (K.unit[k], g, L.unit[l])
        for a in k_in[k]:
            for b in l_in[l]:
                arr = (a, g, b)
                arrows.append(arr)
                g0 = comp[(comp[(inv[psi.arr_map[a]], g)], phi.arr_map[b])]
                src[arr] = (K.src[a], g0, L.src[b])
                tgt[arr] = (k, g, l)
    out_of: dict = {}
    for arr in arrows:
        out_of.setdefault(src[arr], []).append(arr)
    comp_p = {}
    for arr in arrows:
        a, _, b = arr
        for a2, g2, b2 in out_of.get(tgt[arr], []):
            comp_p[((a2, g2, b2), arr)] = (K.comp[(a2, a)], g2, L.comp[(b2, b)])
    for arr in arrows:
        a, _, b = arr
        inv_p[arr] = (K.inv[a], src[arr][1], L.inv[b])
    P = FiniteGroupoid(tuple(objects), tuple(arrows), src, tgt, comp_p, unit, inv_p)
    pi1 = StrictMorphism(P, K, {o: o[0] for o in objects}, {a: a[0] for a in arrows})
    pi2 = StrictMorphism(P, L, {o: o[2] for o in objects}, {a: a[2] for a in arrows})
    square = NaturalTransformation(pi2.then(phi), pi1.then(psi), {o: o[1] for o in objects})
    return PullbackResult(P, pi1, pi2, square)


@dataclass
class TranslationPullback:
    groupoid: TranslationGroupoid  # (G × H) ⋉ P
    pi1: EquivariantMap
    pi2: EquivariantMap


def translation_pullback(psi: EquivariantMap, phi: EquivariantMap) -> TranslationPullback:
    """Pullback of ψ: G⋉X → L⋉Z and φ: H⋉Y → L⋉Z as a translation groupoid.

    P = {(x, m, y) : m·φ(y) = ψ(x)} with (a, b)·(x, m, y) = (a x, ψ(a) m φ(b)^-1, b y).
    """
    Lg = psi.target
    if phi.target is not Lg and phi.target != Lg:
        raise InvalidStructure("pullback legs have different targets")
    G, H, L = psi.source.group, phi.source.group, Lg.group
    X, Y, Z = psi.source.action, phi.source.action, Lg.action
    points = [(x, m, y) for x in X.carrier for y in Y.carrier for m in L.elements
              if Z(m, phi(y)) == psi(x)]
    GH = direct_product(G, H)
    table = {}
    for (a, b) in GH.elements:
        pa, pb = psi.hom[a], L.inv(phi.hom[b])
        for (x, m, y) in points:
            table[((a, b), (x, m, y))] = (X(a, x), L.mul(L.mul(pa, m), pb), Y(b, y))
    action = GroupAction(GH, tuple(points), table)
    gpd = translation_groupoid(action)
    pi1 = EquivariantMap(gpd, psi.source, {ab: ab[0] for ab in GH.elements}, {p: p[0] for p in points})
    pi2 = EquivariantMap(gpd, phi.source, {ab: ab[1] for ab in GH.elements}, {p: p[2] for p in points})
    return TranslationPullback(gpd, pi1, pi2)


def pullback_comparison(tp: TranslationPullback, pb: PullbackResult, psi: EquivariantMap,
                        phi: EquivariantMap) -> StrictMorphism:
    """The canonical functor (G×H)⋉P → K ×_G L identifying the two pullback constructions."""
    obj = {(x, m, y): (x, (m, phi(y)), y) for (x, m, y) in tp.groupoid.objects}
    arr = {}
    for (ab, p) in tp.groupoid.arrows:
        a, b = ab
        x, _, y = p
        _, tm, ty = tp.groupoid.tgt[(ab, p)]
        arr[(ab, p)] = ((a, x), (tm, phi(ty)), (b, y))
    return StrictMorphism(tp.groupoid, pb.groupoid, obj, arr)


def is_isomorphism(m: StrictMorphism) -> bool:
    return (not m.check() and len(set(m.obj_map.values())) == len(m.target.objects) == len(m.source.objects)
            and len(set(m.arr_map.values())) == len(m.target.arrows) == len(m.source.arrows))


def constant_map(source: TranslationGroupoid, target: TranslationGroupoid, point) -> EquivariantMap:
    """Send every point to ``point`` and every group element to the identity."""
    e = target.group.identity
    return EquivariantMap(source, target, {g: e for g in source.group.elements},
                          {z: point for z in source.objects})
