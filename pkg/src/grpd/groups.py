"""Finite groups stored as multiplication tables, and their actions on sets."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import BoundExceeded, InvalidStructure
from .labels import label_key, sorted_labels

Label = Hashable


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    elements: tuple
    table: Mapping[tuple, Label]
    identity: Label

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted_labels(self.elements)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._index

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.elements == other.elements and self.identity == other.identity
                and dict(self.table) == dict(other.table))

    __hash__ = None

    @cached_property
    def _index(self):
        return {g: i for i, g in enumerate(self.elements)}

    def mul(self, a, b):
        return self.table[(a, b)]

    def prod(self, *gs):
        out = self.identity
        for g in gs:
            out = self.table[(out, g)]
        return out

    @cached_property
    def _inverse(self):
        e = self.identity
        return {a: b for a in self.elements for b in self.elements if self.table[(a, b)] == e}

    def inv(self, a):
        return self._inverse[a]

    def conj(self, h, x):
        """h x h^-1"""
        return self.mul(self.mul(h, x), self.inv(h))

    def order(self, g) -> int:
        n, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.elements for b in self.elements)

    def validate(self, associativity: bool = True) -> None:
        els = self.elements
        if len(set(els)) != len(els):
            raise InvalidStructure("duplicate group element labels")
        if self.identity not in self._index:
            raise InvalidStructure("identity is not an element")
        for a in els:
            for b in els:
                c = self.table.get((a, b))
                if c not in self._index:
                    raise InvalidStructure(f"product {a!r}*{b!r} is undefined or outside the group")
        for a in els:
            if self.mul(self.identity, a) != a or self.mul(a, self.identity) != a:
                raise InvalidStructure(f"identity law fails at {a!r}")
            row = {self.mul(a, b) for b in els}
            col = {self.mul(b, a) for b in els}
            if len(row) != len(els) or len(col) != len(els):
                raise InvalidStructure(f"element {a!r} has no inverse")
        if associativity:
            for a, b, c in itertools.product(els, repeat=3):
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise InvalidStructure(f"associativity fails at ({a!r},{b!r},{c!r})")

    @classmethod
    def from_table(cls, elements: Sequence[Label], rows: Sequence[Sequence[Label]], identity=None) -> "FiniteGroup":
        """``rows[i][j]`` is ``elements[i] * elements[j]``."""
        elements = list(elements)
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise InvalidStructure("Cayley table has the wrong shape")
        table = {(a, b): rows[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)}
        if identity is None:
            cands = [e for e in elements if all(table[(e, b)] == b for b in elements)]
            if not cands:
                raise InvalidStructure("Cayley table has no left identity")
            identity = cands[0]
        g = cls(tuple(elements), table, identity)
        g.validate()
        return g

    def subgroup(self, subset: Iterable[Label]) -> "FiniteGroup":
        sub = set(subset)
        if self.identity not in sub:
            raise InvalidStructure("subset does not contain the identity")
        for a in sub:
            if self.inv(a) not in sub:
                raise InvalidStructure("subset not closed under inverses")
            for b in sub:
                if self.mul(a, b) not in sub:
                    raise InvalidStructure("subset not closed under multiplication")
        table = {(a, b): self.mul(a, b) for a in sub for b in sub}
        return FiniteGroup(tuple(sub), table, self.identity)

    def generating_set(self) -> list:
        """Greedy small generating set, preferring elements of high order."""
        gens: list = []
        span = {self.identity}
        for g in sorted(self.elements, key=lambda x: (-self.order(x), label_key(x))):
            if g not in span:
                gens.append(g)
                span = self._closure(gens)
            if len(span) == len(self):
                break
        return gens

    def _closure(self, gens) -> set:
        seen = {self.identity}
        todo = deque([self.identity])
        while todo:
            x = todo.popleft()
            for s in gens:
                y = self.mul(s, x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def to_json(self):
        return {"order": len(self), "elements": [str(e) if not isinstance(e, tuple) else list(e) for e in self.elements]}


def trivial_group(label: Label = "e") -> FiniteGroup:
    return FiniteGroup((label,), {(label, label): label}, label)


def cyclic_group(n: int, gen: str = "r") -> FiniteGroup:
    names = ["e", gen] + [f"{gen}{i}" for i in range(2, n)]
    names = names[:n]
    table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return FiniteGroup(tuple(names), table, "e")


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of 1..n in one-line notation; "12...n" is the identity."""
    perms = list(itertools.permutations(range(n)))
    name = {p: "".join(str(i + 1) for i in p) for p in perms}
    # (p*q)(i) = p(q(i))
    table = {(name[p], name[q]): name[tuple(p[q[i]] for i in range(n))] for p in perms for q in perms}
    return FiniteGroup(tuple(name.values()), table, name[tuple(range(n))])


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    els = [(a, b) for a in g.elements for b in h.elements]
    table = {((a, b), (c, d)): (g.mul(a, c), h.mul(b, d)) for (a, b) in els for (c, d) in els}
    return FiniteGroup(tuple(els), table, (g.identity, h.identity))


def klein_four() -> FiniteGroup:
    """Z2 x Z2 with elements e, u, v, uv."""
    bits = {"e": (0, 0), "u": (1, 0), "v": (0, 1), "uv": (1, 1)}
    back = {v: k for k, v in bits.items()}
    table = {(a, b): back[((bits[a][0] + bits[b][0]) % 2, (bits[a][1] + bits[b][1]) % 2)]
             for a in bits for b in bits}
    return FiniteGroup(tuple(bits), table, "e")


def group_from_permutations(gens: Mapping[str, Sequence[int]], bound: int = 10_000):
    """Close a set of named permutations (as image lists) under composition.

    Elements are labelled by their shortlex-first word in the generator names
    (``"e"`` for the identity).  Returns the group and, for each element, its
    permutation as a tuple.
    """
    names = sorted(gens)
    if not names:
        return trivial_group(), {"e": ()}
    degree = len(gens[names[0]])
    for n in names:
        p = tuple(gens[n])
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise InvalidStructure(f"generator {n!r} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    label = {ident: "e"}
    order = [ident]
    todo = deque([ident])
    while todo:
        p = todo.popleft()
        for n in names:
            s = tuple(gens[n])
            q = tuple(p[s[i]] for i in range(degree))  # p after s: word p then n
            if q not in label:
                w = label[p]
                label[q] = n if w == "e" else f"{w}{n}" if len(n) == 1 else f"{w}.{n}"
                order.append(q)
                todo.append(q)
                if len(order) > bound:
                    raise BoundExceeded(f"permutation group exceeds {bound} elements")
    table = {}
    for p in order:
        for q in order:
            table[(label[p], label[q])] = label[tuple(p[q[i]] for i in range(degree))]
    perm_of = {label[p]: p for p in order}
    return FiniteGroup(tuple(label.values()), table, "e"), perm_of


def isomorphism(a: FiniteGroup, b: FiniteGroup) -> dict | None:
    """Brute-force search for an isomorphism a -> b.

    Generators of ``a`` are sent to candidates of equal order in ``b``; the
    first assignment (in label order) that extends to a bijective
    homomorphism is returned.
    """
    if len(a) != len(b):
        return None
    orders_a = sorted(a.order(x) for x in a.elements)
    orders_b = sorted(b.order(x) for x in b.elements)
    if orders_a != orders_b or a.is_abelian() != b.is_abelian():
        return None
    gens = a.generating_set()
    cands = [[y for y in b.elements if b.order(y) == a.order(g)] for g in gens]
    for images in itertools.product(*cands):
        phi = {a.identity: b.identity}
        todo = deque([a.identity])
        ok = True
        while todo and ok:
            x = todo.popleft()
            for s, t in zip(gens, images):
                y = a.mul(s, x)
                fy = b.mul(t, phi[x])
                if y in phi:
                    if phi[y] != fy:
                        ok = False
                        break
                else:
                    phi[y] = fy
                    todo.append(y)
        if not ok or len(set(phi.values())) != len(b):
            continue
        if all(phi[a.mul(x, y)] == b.mul(phi[x], phi[y]) for x in a.elements for y in a.elements):
            return phi
    return None


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, phi: Mapping) -> bool:
    return all(phi[src.mul(x, y)] == dst.mul(phi[x], phi[y]) for x in src.elements for y in src.elements)


@dataclass(frozen=True, eq=False)
class GroupAction:
    """A left action of ``group`` on the finite set ``carrier``."""

    group: FiniteGroup
    carrier: tuple
    table: Mapping[tuple, Label] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(sorted_labels(self.carrier)))

    def __call__(self, g, x):
        return self.table[(g, x)]

    def __eq__(self, other):
        if not isinstance(other, GroupAction):
            return NotImplemented
        return self.group == other.group and self.carrier == other.carrier and dict(self.table) == dict(other.table)

    __hash__ = None

    def validate(self) -> None:
        g = self.group
        cs = set(self.carrier)
        for a in g.elements:
            for x in self.carrier:
                y = self.table.get((a, x))
                if y not in cs:
                    raise InvalidStructure(f"action of {a!r} on {x!r} is undefined or leaves the carrier")
        for x in self.carrier:
            if self(g.identity, x) != x:
                raise InvalidStructure(f"identity does not fix {x!r}")
        for a in g.elements:
            for b in g.elements:
                ab = g.mul(a, b)
                for x in self.carrier:
                    if self(ab, x) != self(a, self(b, x)):
                        raise InvalidStructure(f"action not compatible with product at ({a!r},{b!r},{x!r})")

    @cached_property
    def perms(self) -> dict:
        return {g: {x: self.table[(g, x)] for x in self.carrier} for g in self.group.elements}

    @cached_property
    def orbit_index(self) -> dict:
        """Maps each point to the smallest point of its orbit."""
        out = {}
        for x in self.carrier:
            if x in out:
                continue
            orb = {self(g, x) for g in self.group.elements}
            rep = min(orb, key=label_key)
            for y in orb:
                out[y] = rep
        return out

    def orbits(self) -> list[tuple]:
        groups: dict = {}
        for x in self.carrier:
            groups.setdefault(self.orbit_index[x], []).append(x)
        return [tuple(groups[r]) for r in sorted_labels(groups)]

    def stabilizer(self, x) -> list:
        return [g for g in self.group.elements if self(g, x) == x]

    def is_free(self) -> bool:
        return all(len(self.stabilizer(x)) == 1 for x in self.carrier)


def make_action(group: FiniteGroup, carrier: Iterable, fn) -> GroupAction:
    carrier = tuple(carrier)
    return GroupAction(group, carrier, {(g, x): fn(g, x) for g in group.elements for x in carrier})


def trivial_action(group: FiniteGroup, carrier: Iterable) -> GroupAction:
    return make_action(group, carrier, lambda g, x: x)


def product_action(a: GroupAction, b: GroupAction) -> GroupAction:
    """(g, h).(x, y) = (g x, h y)"""
    grp = direct_product(a.group, b.group)
    carrier = [(x, y) for x in a.carrier for y in b.carrier]
    return make_action(grp, carrier, lambda gh, xy: (a(gh[0], xy[0]), b(gh[1], xy[1])))


def extend_action(group: FiniteGroup, carrier: Sequence, generator_perms: Mapping[Label, Mapping]) -> GroupAction:
    """Extend permutations given for some elements to an action of the whole group.

    Raises if the elements do not generate the group or the assignment is not
    a homomorphism.
    """
    carrier = tuple(carrier)
    act = {group.identity: {x: x for x in carrier}}
    todo = deque([group.identity])
    gens = sorted_labels(generator_perms)
    for s in gens:
        if s not in group:
            raise InvalidStructure(f"{s!r} is not a group element")
        p = generator_perms[s]
        if set(p) != set(carrier) or set(p.values()) != set(carrier):
            raise InvalidStructure(f"action of {s!r} is not a permutation of the carrier")
    while todo:
        h = todo.popleft()
        for s in gens:
            sh = group.mul(s, h)
            p = {x: generator_perms[s][act[h][x]] for x in carrier}
            if sh in act:
                if act[sh] != p:
                    raise InvalidStructure("generator permutations do not define a group action")
            else:
                act[sh] = p
                todo.append(sh)
    if len(act) != len(group):
        raise InvalidStructure("action generators do not generate the group")
    action = GroupAction(group, carrier, {(g, x): act[g][x] for g in group.elements for x in carrier})
    action.validate()
    return action
