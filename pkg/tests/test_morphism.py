import itertools

from grpd.groupoid import point_groupoid, translation_groupoid, unit_groupoid
from grpd.groups import cyclic_group, direct_product, symmetric_group, trivial_action
from grpd.loopbase import PathContext, diagonal_map, evaluation_map, free_loop_groupoid
from grpd.morphism import (EquivariantMap, NaturalTransformation, StrictMorphism, constant_map,
                           groupoid_pullback, is_essential_equivalence, is_isomorphism,
                           natural_transformation_exists, pullback_comparison, translation_pullback)

from conftest import point_space


def conjugation_map(G, h):
    p = point_groupoid(G)
    return EquivariantMap(p, p, {k: G.conj(h, k) for k in G.elements}, {"•": "•"})


def test_identity_transformation():
    p = point_groupoid(cyclic_group(3))
    ident = StrictMorphism.identity(p)
    nt = natural_transformation_exists(ident, ident)
    assert nt is not None and nt.check() == []
    assert nt.component["•"] == ("e", "•")


def test_conjugation_transformation_on_abelian_point():
    Z3 = cyclic_group(3)
    ident = EquivariantMap.identity(point_groupoid(Z3)).strict()
    conj = conjugation_map(Z3, "r").strict()
    # exhaust the |G| candidate components: in an abelian group every one is natural
    valid = [g for g in Z3.elements if NaturalTransformation(ident, conj, {"•": (g, "•")}).check() == []]
    assert valid == ["e", "r", "r2"]
    assert NaturalTransformation(ident, conj, {"•": ("r", "•")}).check() == []
    assert natural_transformation_exists(ident, conj) is not None


def test_conjugation_transformation_is_unique_in_s3():
    S3 = symmetric_group(3)
    ident = EquivariantMap.identity(point_groupoid(S3)).strict()
    for h in S3.elements:
        nt = natural_transformation_exists(ident, conjugation_map(S3, h).strict())
        assert nt.component["•"] == (h, "•")  # the centre of S3 is trivial


def test_no_transformation_between_non_conjugate_homs():
    S3 = symmetric_group(3)
    p = point_groupoid(S3)
    trivial = EquivariantMap(p, p, {k: "123" for k in S3.elements}, {"•": "•"})
    assert natural_transformation_exists(EquivariantMap.identity(p).strict(), trivial.strict()) is None


def test_transformation_inverse():
    S3 = symmetric_group(3)
    ident = EquivariantMap.identity(point_groupoid(S3)).strict()
    nt = natural_transformation_exists(ident, conjugation_map(S3, "231").strict())
    inv = nt.inverse()
    assert inv.check() == []
    assert inv.component["•"] == (S3.inv("231"), "•")


def test_essential_equivalences(corpus):
    p = point_groupoid(cyclic_group(2))
    rep = is_essential_equivalence(StrictMorphism.identity(p))
    assert rep.fully_faithful and rep.essentially_surjective
    q = corpus["quotient-c6-c3"].maps["quotient"].map
    assert q.hom == {"e": "e", "g": "e"}
    assert all(q(str(i)) == str(i % 3) for i in range(6))
    rep = is_essential_equivalence(q.strict())
    assert rep.ok
    a, ab = unit_groupoid(["a"]), unit_groupoid(["a", "b"])
    inc = EquivariantMap(a, ab, {"e": "e"}, {"a": "a"}).strict()
    rep = is_essential_equivalence(inc)
    assert rep.fully_faithful and not rep.essentially_surjective


def test_non_faithful_map():
    Z2 = cyclic_group(2, "g")
    p, one = point_groupoid(Z2), point_groupoid(cyclic_group(1))
    rep = is_essential_equivalence(constant_map(p, one, "•").strict())
    assert rep.essentially_surjective and not rep.fully_faithful


def test_pullback_of_identities():
    u = unit_groupoid(["x"])
    ident = StrictMorphism.identity(u)
    pb = groupoid_pullback(ident, ident)
    assert (len(pb.groupoid.objects), len(pb.groupoid.arrows)) == (1, 1)
    assert pb.square.check() == []


def test_loop_pullback_on_point_z2(z2):
    ctx = PathContext(point_space(z2), 2)
    pb = free_loop_groupoid(ctx).pullback.groupoid
    expected = {("•", ((h, l), ("•", "•")), ctx.paths.objects[0]) for h in z2.elements for l in z2.elements}
    assert set(pb.objects) == expected and len(expected) == 4
    assert pb.check_axioms() == []


def test_translation_pullback_structure_groups(reflection, z2):
    G = reflection.group
    ident = EquivariantMap.identity(reflection.groupoid)
    tp = translation_pullback(ident, ident)
    assert len(tp.groupoid.group) == len(G) ** 2
    e = cyclic_group(1)
    u = translation_groupoid(trivial_action(e, ["a", "b"]))
    ue = EquivariantMap.identity(u)
    assert len(translation_pullback(ue, ue).groupoid.group) == 1


def test_diagonal_against_evaluation_at_unit_grid(reflection):
    ctx = PathContext(reflection, 1)
    d, ev = diagonal_map(ctx), evaluation_map(ctx)
    tp = translation_pullback(d, ev)
    assert len(tp.groupoid.group) == 4
    # count triples (x, (a, b), alpha) with (a, b)·(alpha(0), alpha(T)) = (x, x)
    act = reflection.action
    count = sum(1 for x in act.carrier for a in ctx.paths.objects
                for g, h in itertools.product(reflection.group.elements, repeat=2)
                if act(g, a.samples[0]) == x and act(h, a.samples[-1]) == x)
    assert len(tp.groupoid.objects) == count
    gp = groupoid_pullback(d.strict(), ev.strict())
    assert is_isomorphism(pullback_comparison(tp, gp, d, ev))
    assert tp.pi1.check() == [] and tp.pi2.check() == []


def test_pullback_square_commutes_up_to_the_canonical_transformation(rotation):
    ctx = PathContext(rotation, 1)
    pb = groupoid_pullback(diagonal_map(ctx).strict(), evaluation_map(ctx).strict())
    assert pb.square.check() == []
    assert pb.groupoid.check_axioms() == []


def test_strict_morphism_check_catches_bad_arrow_map(reflection):
    gpd = reflection.groupoid
    ident = StrictMorphism.identity(gpd)
    arr = dict(ident.arr_map)
    arr[("g", "1")] = ("e", "1")
    assert StrictMorphism(gpd, gpd, ident.obj_map, arr).check() != []


def test_composition_of_maps(corpus):
    inst = corpus["quotient-c6-c3"]
    q = inst.maps["quotient"].map
    ident = EquivariantMap.identity(inst.gaction.groupoid)
    assert ident.then(q).carrier_map == q.carrier_map
    assert ident.then(q).strict().check() == []


def test_product_group_labels():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    assert len(G) == 6 and G.identity == ("e", "e")
