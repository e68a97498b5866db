"""Finite groupoids with explicit structure tables, translation groupoids and skeleta."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping

from .errors import InvalidStructure
from .groups import (FiniteGroup, GroupAction, isomorphism, make_action,
                     trivial_action, trivial_group)
from .labels import label_key, sorted_labels


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    objects: tuple
    arrows: tuple
    src: Mapping = field(repr=False)
    tgt: Mapping = field(repr=False)
    comp: Mapping = field(repr=False)  # (b, a) -> b∘a, defined when tgt(a) == src(b)
    unit: Mapping = field(repr=False)
    inv: Mapping = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted_labels(self.objects)))
        object.__setattr__(self, "arrows", tuple(sorted_labels(self.arrows)))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        if self is other:
            return True
        return (self.objects == other.objects and self.arrows == other.arrows
                and dict(self.src) == dict(other.src) and dict(self.tgt) == dict(other.tgt)
                and dict(self.comp) == dict(other.comp))

    __hash__ = None

    def compose(self, b, a):
        """b after a."""
        try:
            return self.comp[(b, a)]
        except KeyError:
            raise InvalidStructure(f"arrows {b!r} and {a!r} are not composable") from None

    @cached_property
    def _hom(self) -> dict:
        out: dict = {}
        for a in self.arrows:
            out.setdefault((self.src[a], self.tgt[a]), []).append(a)
        return out

    @cached_property
    def _out(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for a in self.arrows:
            out[self.src[a]].append(a)
        return out

    def hom(self, x, y) -> list:
        return self._hom.get((x, y), [])

    def arrows_from(self, x) -> list:
        return self._out[x]

    def check_axioms(self) -> list[str]:
        """Exhaustively check the groupoid laws; returns the violations found."""
        errs: list[str] = []
        objs = set(self.objects)
        for x in self.objects:
            u = self.unit.get(x)
            if u is None or self.src.get(u) != x or self.tgt.get(u) != x:
                errs.append(f"unit of {x!r} is missing or not an endo-arrow")
        for a in self.arrows:
            if self.src.get(a) not in objs or self.tgt.get(a) not in objs:
                errs.append(f"arrow {a!r} has an endpoint outside the object set")
        if errs:
            return errs
        arrs = set(self.arrows)
        for a in self.arrows:
            s, t = self.src[a], self.tgt[a]
            if self.comp.get((a, self.unit[s])) != a or self.comp.get((self.unit[t], a)) != a:
                errs.append(f"unit law fails at {a!r}")
            i = self.inv.get(a)
            if i not in arrs or self.comp.get((i, a)) != self.unit[s] or self.comp.get((a, i)) != self.unit[t]:
                errs.append(f"inverse law fails at {a!r}")
            for b in self._out[t]:
                ba = self.comp.get((b, a))
                if ba not in arrs or self.src[ba] != s or self.tgt[ba] != self.tgt[b]:
                    errs.append(f"composite of {b!r} after {a!r} is missing or misplaced")
                    continue
                for c in self._out[self.tgt[b]]:
                    if self.comp.get((c, ba)) != self.comp.get((self.comp.get((c, b)), a)):
                        errs.append(f"associativity fails at ({c!r},{b!r},{a!r})")
            if len(errs) > 20:
                break
        expected = sum(len(self._out[self.tgt[a]]) for a in self.arrows)
        if len(self.comp) != expected:
            errs.append("composition is defined on non-composable pairs")
        return errs

    def validate(self) -> None:
        errs = self.check_axioms()
        if errs:
            raise InvalidStructure("; ".join(errs[:5]))

    @cached_property
    def component_of(self) -> dict:
        """Maps each object to the smallest object of its connected component."""
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            r1, r2 = find(self.src[a]), find(self.tgt[a])
            if r1 != r2:
                parent[r2] = r1
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(find(x), []).append(x)
        out = {}
        for members in groups.values():
            rep = min(members, key=label_key)
            for x in members:
                out[x] = rep
        return out

    def components(self) -> list[tuple]:
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(self.component_of[x], []).append(x)
        return [tuple(groups[r]) for r in sorted_labels(groups)]

    def summary(self) -> dict:
        return {"objects": len(self.objects), "arrows": len(self.arrows),
                "components": len(self.components())}


@dataclass(frozen=True, eq=False)
class TranslationGroupoid(FiniteGroupoid):
    """G ⋉ X: arrows are pairs (g, x) from x to g·x."""

    action: GroupAction = field(default=None, repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.action.group


def translation_groupoid(action: GroupAction, validate: bool = True) -> TranslationGroupoid:
    if validate:
        action.validate()
    g = action.group
    src, tgt, comp, unit, inv = {}, {}, {}, {}, {}
    arrows = []
    for a in g.elements:
        for x in action.carrier:
            arr = (a, x)
            arrows.append(arr)
            src[arr] = x
            tgt[arr] = action(a, x)
    for a, x in arrows:
        ax = tgt[(a, x)]
        inv[(a, x)] = (g.inv(a), ax)
        for b in g.elements:
            comp[((b, ax), (a, x))] = (g.mul(b, a), x)
    for x in action.carrier:
        unit[x] = (g.identity, x)
    return TranslationGroupoid(action.carrier, tuple(arrows), src, tgt, comp, unit, inv, action)


def unit_groupoid(carrier: Iterable) -> TranslationGroupoid:
    return translation_groupoid(trivial_action(trivial_group(), carrier))


def point_groupoid(group: FiniteGroup, point: str = "•") -> TranslationGroupoid:
    return translation_groupoid(trivial_action(group, [point]))


def multiplication_groupoid(sub: FiniteGroup, group: FiniteGroup) -> TranslationGroupoid:
    """H acting on G by left multiplication."""
    _check_subgroup(sub, group)
    return translation_groupoid(make_action(sub, group.elements, group.mul))


def conjugation_groupoid(sub: FiniteGroup, group: FiniteGroup) -> TranslationGroupoid:
    """H acting on G by h·x = h x h^-1."""
    _check_subgroup(sub, group)
    return translation_groupoid(make_action(sub, group.elements, group.conj))


def _check_subgroup(sub: FiniteGroup, group: FiniteGroup) -> None:
    for a in sub.elements:
        if a not in group:
            raise InvalidStructure(f"{a!r} is not an element of the ambient group")
        for b in sub.elements:
            if sub.mul(a, b) != group.mul(a, b):
                raise InvalidStructure("subgroup multiplication disagrees with the ambient group")


def standard_groupoid(kind: str, *args) -> TranslationGroupoid:
    builders = {"unit": unit_groupoid, "point": point_groupoid,
                "multiplication": multiplication_groupoid, "conjugation": conjugation_groupoid}
    if kind not in builders:
        raise InvalidStructure(f"unknown standard groupoid {kind!r}")
    return builders[kind](*args)


def isotropy(gpd: FiniteGroupoid, x) -> FiniteGroup:
    arrows = gpd.hom(x, x)
    table = {(a, b): gpd.comp[(a, b)] for a in arrows for b in arrows}
    return FiniteGroup(tuple(arrows), table, gpd.unit[x])


def skeleton(gpd: FiniteGroupoid) -> list[tuple[Any, FiniteGroup]]:
    """One (representative, isotropy group) pair per connected component."""
    return [(comp[0], isotropy(gpd, comp[0])) for comp in gpd.components()]


@dataclass
class EquivalenceCertificate:
    equivalent: bool
    matching: list = field(default_factory=list)  # (rep in A, rep in B, isotropy isomorphism)
    reason: str = ""

    def to_json(self):
        from .labels import render
        return {"equivalent": self.equivalent, "reason": self.reason,
                "matching": [{"left": render(a), "right": render(b),
                              "isotropy_order": len(iso)} for a, b, iso in self.matching]}


def are_equivalent(a: FiniteGroupoid, b: FiniteGroupoid) -> EquivalenceCertificate:
    """Two finite groupoids are equivalent iff their skeleta match.

    Components are paired in representative order; each pairing carries an
    explicit isomorphism of isotropy groups.
    """
    sa, sb = skeleton(a), skeleton(b)
    if len(sa) != len(sb):
        return EquivalenceCertificate(False, reason=f"{len(sa)} components vs {len(sb)}")
    unused = list(range(len(sb)))
    matching = []
    for rep, grp in sa:
        for j in unused:
            phi = isomorphism(grp, sb[j][1])
            if phi is not None:
                matching.append((rep, sb[j][0], phi))
                unused.remove(j)
                break
        else:
            return EquivalenceCertificate(False, matching,
                                          f"no partner for component of {rep!r} (isotropy order {len(grp)})")
    return EquivalenceCertificate(True, matching)
