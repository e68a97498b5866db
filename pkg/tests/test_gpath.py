import itertools
import random

import pytest

from grpd.errors import ContextMismatch, InvalidStructure, LiftError
from grpd.gpath import (GPath, build_Y_alpha, check_Y_alpha, chi, chi_inverse, chi_witness, colimit_normal_form,
                        enumerate_gpaths, gpath_act, gpath_equivalent_direct, induced_map, iso_check, lift_gpath,
                        map_gpath, random_gpath, refine, refine_to, xi, xi_inverse)
from grpd.groups import trivial_group
from grpd.morphism import EquivariantMap, constant_map, is_essential_equivalence
from grpd.space import DiscretePath, GraphAction, SpaceGraph, act_on_path, constant_path, enumerate_paths

from conftest import point_space


def gp(action, cuts, pieces, conns=()):
    return GPath.from_cuts(action, cuts, pieces, conns)


def test_validation(reflection):
    assert gp(reflection, [0, 1, 2], [["0", "1"], ["3", "2"]], ["g"]).check() == []
    bad = gp(reflection, [0, 1, 2], [["0", "1"], ["1", "2"]], ["g"])
    assert bad.check() != []
    with pytest.raises(InvalidStructure):
        bad.validate()
    with pytest.raises(InvalidStructure):
        GPath(reflection, [DiscretePath(["0"])], ["g"])


def test_refine(reflection):
    p = GPath.single(reflection, DiscretePath(["0", "1", "2"]))
    r = refine(p, 1, 0)
    assert [x.samples for x in r.pieces] == [("0", "1"), ("1", "2")]
    assert r.connectors == ("e",)
    assert colimit_normal_form(r) == p
    q = gp(reflection, [0, 1, 2], [["0", "1"], ["3", "2"]], ["g"])
    d = refine(q, 1, 0)
    assert d.cuts == (0, 1, 1, 2) and d.pieces[1].samples == ("1",)
    assert d.check() == []


def test_normal_form(reflection):
    e_only = gp(reflection, [0, 1, 2], [["0", "1"], ["1", "2"]], ["e"])
    assert colimit_normal_form(e_only) == GPath.single(reflection, DiscretePath(["0", "1", "2"]))
    minimal = gp(reflection, [0, 1, 2], [["0", "1"], ["3", "2"]], ["g"])
    assert colimit_normal_form(minimal) == minimal
    three = gp(reflection, [0, 1, 2, 3], [["0", "1"], ["1", "2"], ["2", "3"]], ["e", "g"])
    nf = colimit_normal_form(three)
    assert [x.samples for x in nf.pieces] == [("0", "1", "2"), ("2", "3")] and nf.connectors == ("g",)


def test_refine_to_reaches_requested_cuts(reflection):
    p = gp(reflection, [0, 1, 2], [["0", "1"], ["3", "2"]], ["g"])
    r = refine_to(p, [0, 1, 1, 2, 2])
    assert r.cuts == (0, 1, 1, 2, 2)
    assert colimit_normal_form(r) == p


def test_direct_equivalence_examples(reflection):
    a = gp(reflection, [0, 1, 1], [["0", "1"], ["3"]], ["g"])
    b = gp(reflection, [0, 1], [["0", "1"]])
    w = gpath_equivalent_direct(a, b)
    assert w is not None and w.check()
    assert w.elements == ("e", "g")
    assert iso_check(a, b) is not None
    assert gpath_equivalent_direct(a, a).elements == ("e", "e")
    s1, s2 = GPath.single(reflection, DiscretePath(["0", "1", "2"])), GPath.single(reflection, DiscretePath(["0", "3", "2"]))
    assert gpath_equivalent_direct(s1, s2).elements == ("g",)
    assert iso_check(s1, s2) == "g"
    c, d = GPath.single(reflection, DiscretePath(["0", "1"])), GPath.single(reflection, DiscretePath(["2", "1"]))
    assert gpath_equivalent_direct(c, d) is None and iso_check(c, d) is None
    assert iso_check(s1, s1) == "e"


def test_context_mismatch(reflection, rotation):
    a = GPath.single(reflection, DiscretePath(["0", "1"]))
    b = GPath.single(rotation, DiscretePath(["0", "1"]))
    with pytest.raises(ContextMismatch):
        iso_check(a, b)
    with pytest.raises(ContextMismatch):
        gpath_equivalent_direct(a, GPath.single(reflection, DiscretePath(["0", "1", "2"])))


def straighten_by_hand(action, p):
    # c(r) = (k_{i-1} ... k_1)^-1 alpha_i(r), written independently of chi
    G = action.group
    out = list(p.pieces[0].samples)
    prefix = G.identity
    for k, piece in zip(p.connectors, p.pieces[1:]):
        prefix = G.mul(k, prefix)
        out += [action.action(G.inv(prefix), v) for v in piece.samples[1:]]
    return tuple(out)


def test_chi(reflection):
    p = gp(reflection, [0, 1, 2], [["0", "1"], ["3", "2"]], ["g"])
    assert chi(p).samples == ("0", "1", "2") == straighten_by_hand(reflection, p)
    assert gpath_equivalent_direct(p, chi_inverse(chi(p), reflection)) is not None
    beta = DiscretePath(["1", "2"], 1)
    q = GPath(reflection, [DiscretePath(["0", "1"]), act_on_path(reflection.action, "g", beta)], ["g"])
    assert chi(q).samples == ("0", "1", "2")
    single = GPath.single(reflection, DiscretePath(["0", "3"]))
    assert chi(single) == DiscretePath(["0", "3"])
    const = chi_inverse(constant_path("2", 3), reflection)
    assert const.pieces == (constant_path("2", 3),) and const.connectors == ()


def test_chi_matches_hand_formula_on_enumeration(rotation):
    for p in enumerate_gpaths(rotation, 2):
        assert chi(p).samples == straighten_by_hand(rotation, p)


def test_chi_inverse_validates(rotation):
    for c in enumerate_paths(rotation.graph, 2):
        assert chi_inverse(c, rotation).check() == []


def test_chi_witness(rotation):
    p = gp(rotation, [0, 1, 2], [["0", "1"], ["4", "5"]], ["g"])
    w = chi_witness(p)
    assert w == ("e", "g")
    assert colimit_normal_form(gpath_act(w, p)) == chi_inverse(chi(p), rotation)


def test_multiple_gpaths(reflection):
    for c in enumerate_paths(reflection.graph, 2):
        m = xi_inverse(c, reflection)
        assert xi(m) == c and xi_inverse(xi(m), reflection) == m
        assert m.check() == []
    m = xi_inverse(DiscretePath(["0", "1", "2"]), reflection)
    G = reflection.group
    for g in G.elements:
        for r in range(3):
            assert m.sigma(g, r) == reflection.action(G.inv(g), m.e_branch.at(r))
    assert m.branch("g").samples == ("0", "3", "2")


def test_Y_alpha(reflection):
    single = GPath.single(reflection, DiscretePath(["0", "1", "2"]))
    y = build_Y_alpha(single)
    assert len(y.groupoid.objects) == 2 * 3
    assert check_Y_alpha(y) == []
    ex = gp(reflection, [0, 1, 1], [["0", "1"], ["3"]], ["g"])
    y = build_Y_alpha(ex)
    assert len(y.groupoid.objects) == len(reflection.group) * (ex.T + 1)
    assert is_essential_equivalence(y.nu).ok
    assert check_Y_alpha(y) == []


def test_Y_alpha_size_on_random_paths(rotation):
    rng = random.Random(7)
    for _ in range(20):
        p = random_gpath(rotation, rng.randint(1, 4), rng)
        y = build_Y_alpha(p)
        assert len(y.groupoid.objects) == len(rotation.group) * (p.T + 1)


def test_induced_maps(corpus):
    inst = corpus["quotient-c6-c3"]
    nm = inst.maps["quotient"]
    ind = induced_map(nm.map, inst.gaction, nm.target.gaction, 1)
    assert ind(DiscretePath(["0", "1"])) == DiscretePath(["0", "1"])
    assert ind(DiscretePath(["4", "5"])) == DiscretePath(["1", "2"])
    ident = EquivariantMap.identity(inst.gaction.groupoid)
    i1 = induced_map(ident, inst.gaction, inst.gaction, 2)
    assert all(i1(a) == a for a in i1.source.objects)


def test_induced_maps_compose(corpus):
    inst = corpus["quotient-c6-c3"]
    nm = inst.maps["quotient"]
    src, tgt = inst.gaction, nm.target.gaction
    ident = EquivariantMap.identity(src.groupoid)
    chain = ident.then(nm.map)
    T = 2
    direct = induced_map(chain, src, tgt, T)
    first = induced_map(ident, src, src, T)
    second = induced_map(nm.map, src, tgt, T)
    assert all(direct(a) == second(first(a)) for a in direct.source.objects)


def test_lift_along_identity(reflection):
    ident = EquivariantMap.identity(reflection.groupoid)
    p = GPath.single(reflection, DiscretePath(["0", "1", "2"]))
    res = lift_gpath(ident, p, reflection)
    assert chi(res.gpath) == chi(p)
    assert set(res.witness) == {"e"}


def test_lift_along_quotient(corpus):
    inst = corpus["quotient-c6-c3"]
    nm = inst.maps["quotient"]
    gamma = nm.target.gpaths["walk"]
    res = lift_gpath(nm.map, gamma, inst.gaction)
    pushed = map_gpath(nm.map, res.gpath, nm.target.gaction)
    assert chi(pushed).samples == ("0", "1", "2")
    assert gpath_act(res.witness, pushed) == res.target
    assert iso_check(res.target, gamma) is not None
    assert [str(int(v) % 3) for v in chi(res.gpath).samples] == ["0", "1", "2"]


def test_lift_with_nonidentity_connector(rotation):
    ident = EquivariantMap.identity(rotation.groupoid)
    jump = GPath.from_cuts(rotation, [0, 1, 2], [["0", "1"], ["4", "5"]], ["g"])
    res = lift_gpath(ident, jump, rotation)
    pushed = map_gpath(ident, res.gpath, rotation)
    assert gpath_act(res.witness, pushed) == res.target
    assert iso_check(res.target, jump) is not None


def test_lift_needs_an_essential_equivalence(reflection):
    one = point_space(trivial_group())
    collapse = constant_map(reflection.groupoid, one.groupoid, "•")
    with pytest.raises(LiftError):
        lift_gpath(collapse, GPath.single(one, constant_path("•", 1)), reflection)


def test_lift_fails_without_edges(corpus):
    inst = corpus["quotient-c6-c3"]
    nm = inst.maps["quotient"]
    edgeless = GraphAction(SpaceGraph(inst.gaction.graph.vertices, frozenset()), inst.gaction.action)
    with pytest.raises(LiftError):
        lift_gpath(nm.map, nm.target.gpaths["walk"], edgeless)


def test_enumeration_sizes(reflection):
    # one piece: all paths; two pieces: cut c in 0..T, pieces glued by any valid connector
    T = 1
    paths = {t: enumerate_paths(reflection.graph, t) for t in range(T + 1)}
    G = reflection.group
    two = 0
    for c in range(T + 1):
        for a, b in itertools.product(paths[c], paths[T - c]):
            two += sum(1 for k in G.elements if reflection.action(k, a.samples[-1]) == b.samples[0])
    assert len(enumerate_gpaths(reflection, T)) == len(paths[T]) + two
