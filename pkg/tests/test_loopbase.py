import itertools

import pytest

from grpd.errors import InvalidStructure
from grpd.groupoid import are_equivalent, conjugation_groupoid, multiplication_groupoid, unit_groupoid
from grpd.groups import cyclic_group, symmetric_group, trivial_group, trivial_action
from grpd.loopbase import (PathContext, based_groupoid, check_based_action_trivial, diagonal_map,
                           endpoint_map, evaluation_map, free_loop_groupoid, loop_to_path_projection,
                           omega_via_path_loop, path_loop_morphism, reduced_based_paths,
                           reduced_loop_groupoid, trivial_isotropy, verify_diagonal_factorization)
from grpd.morphism import natural_transformation_exists
from grpd.space import DiscretePath, GraphAction, constant_path, enumerate_paths

from conftest import point_space


def test_evaluation(reflection):
    ctx = PathContext(reflection, 2)
    ev = evaluation_map(ctx)
    assert ev(constant_path("2", 2)) == ("2", "2")
    assert ev.check() == []
    act, pact, sq = reflection.action, ctx.paths.action, ctx.square.action
    for g in reflection.group.elements:
        for a in ctx.paths.objects:
            assert ev(pact(g, a)) == sq((g, g), ev(a))


def test_diagonal(reflection, z2):
    plain = GraphAction(reflection.graph, trivial_action(trivial_group(), reflection.graph.vertices))
    d = diagonal_map(PathContext(plain, 1))
    assert d.carrier_map == {v: (v, v) for v in "0123"}
    pd = diagonal_map(PathContext(point_space(z2), 1))
    assert pd.carrier_map == {"•": ("•", "•")} and pd.hom == {"e": ("e", "e"), "g": ("g", "g")}


def test_loop_pullback_triangles(reflection):
    ctx = PathContext(reflection, 1)
    pb = free_loop_groupoid(ctx).pullback
    d, ev = diagonal_map(ctx).strict(), evaluation_map(ctx).strict()
    assert pb.square.check() == []
    assert natural_transformation_exists(pb.pi1.then(d), pb.pi2.then(ev)) is not None
    assert natural_transformation_exists(pb.pi2.then(ev), pb.pi1.then(d)) is not None


@pytest.mark.parametrize("name,T", [("point", 2), ("reflection", 2), ("rotation", 1)])
def test_diagonal_factorization(name, T, reflection, rotation, z2):
    ga = {"point": point_space(z2), "reflection": reflection, "rotation": rotation}[name]
    assert verify_diagonal_factorization(PathContext(ga, T)) is not None


def test_point_loops_are_conjugation():
    for G in (cyclic_group(2), cyclic_group(3), symmetric_group(3)):
        loops = free_loop_groupoid(PathContext(point_space(G), 2))
        assert are_equivalent(loops.reduced, conjugation_groupoid(G, G)).equivalent
        assert loops.certificate.equivalent


def test_trivial_group_loops_are_classical(reflection):
    plain = GraphAction(reflection.graph, trivial_action(trivial_group(), reflection.graph.vertices))
    red = reduced_loop_groupoid(PathContext(plain, 2))
    classical = {a for a in enumerate_paths(reflection.graph, 2) if a.samples[0] == a.samples[-1]}
    assert {a for a, _ in red.objects} == classical
    assert len(red.objects) == len(classical)


def test_loop_through_a_reflection(reflection):
    ctx = PathContext(reflection, 2)
    red = reduced_loop_groupoid(ctx)
    alpha = DiscretePath(["1", "0", "3"])
    assert (alpha, "g") in red.objects
    assert not any(red.src[a] == (alpha, "g") and red.tgt[a][1] == "e" for a in red.arrows)


def test_projection_to_paths(reflection, z2):
    plain = GraphAction(reflection.graph, trivial_action(trivial_group(), reflection.graph.vertices))
    ctx = PathContext(plain, 2)
    assert not loop_to_path_projection(ctx, reduced_loop_groupoid(ctx)).non_injective
    ctx = PathContext(reflection, 2)
    rep = loop_to_path_projection(ctx, reduced_loop_groupoid(ctx))
    assert rep.non_injective
    a, b = rep.example
    assert ctx.paths.component_of[a[0]] == ctx.paths.component_of[b[0]]
    pctx = PathContext(point_space(z2), 2)
    rep = loop_to_path_projection(pctx, reduced_loop_groupoid(pctx))
    assert (rep.loop_classes, rep.path_classes_hit) == (2, 1)


def test_point_based_groupoids():
    for G in (cyclic_group(2), symmetric_group(3)):
        ctx = PathContext(point_space(G), 1)
        om = based_groupoid(ctx, "omega_x", "•")
        assert are_equivalent(om.reduced, unit_groupoid(G.elements)).equivalent
        assert om.alternative_certificate.equivalent
        px = based_groupoid(ctx, "path_x", "•")
        assert are_equivalent(px.reduced, multiplication_groupoid(G, G)).equivalent
        assert px.certificate.equivalent
        pb, cert = omega_via_path_loop(ctx, "•", "•")
        assert cert.equivalent
        assert are_equivalent(pb.groupoid, unit_groupoid(G.elements)).equivalent


def test_based_paths_on_the_reflection(reflection):
    ctx = PathContext(reflection, 1)
    red = reduced_based_paths(ctx, "1", "1")
    assert red.objects == ((DiscretePath(["1", "1"]), "e"),)
    om = based_groupoid(ctx, "omega_xy", "1", "1")
    assert trivial_isotropy(om.pullback.groupoid) and om.certificate.equivalent
    assert check_based_action_trivial(ctx, "1", "1") == []
    _, cert = omega_via_path_loop(ctx, "1", "1")
    assert cert.equivalent


def test_based_paths_counted_by_hand(reflection):
    ctx = PathContext(reflection, 2)
    act = reflection.action
    for x, y in itertools.product("0123", repeat=2):
        expected = sum(1 for a in enumerate_paths(reflection.graph, 2) for k in reflection.group.elements
                       if a.samples[0] == x and a.samples[-1] == act(k, y))
        assert len(reduced_based_paths(ctx, x, y).objects) == expected


def test_bad_basepoints(reflection):
    ctx = PathContext(reflection, 1)
    with pytest.raises(InvalidStructure):
        based_groupoid(ctx, "omega_x", "9")
    with pytest.raises(InvalidStructure):
        based_groupoid(ctx, "omega_xy", "0")
    with pytest.raises(InvalidStructure):
        based_groupoid(ctx, "nonsense", "0")


def test_path_loop_morphism(reflection):
    ctx = PathContext(reflection, 1)
    p1 = path_loop_morphism(ctx, "0")
    assert p1.check() == []
    assert p1.target is ctx.space
    assert endpoint_map(ctx, 0).check() == []
