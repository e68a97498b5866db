import pytest

from grpd.groupoid import (FiniteGroupoid, are_equivalent, conjugation_groupoid, isotropy,
                           multiplication_groupoid, point_groupoid, skeleton, standard_groupoid,
                           translation_groupoid, unit_groupoid)
from grpd.groups import cyclic_group, direct_product, make_action, symmetric_group, trivial_action
from grpd.errors import InvalidStructure


def test_point_action_has_one_object_two_endo_arrows(z2):
    gpd = translation_groupoid(trivial_action(z2, ["•"]))
    assert gpd.objects == ("•",)
    assert len(gpd.arrows) == 2
    assert all(gpd.src[a] == gpd.tgt[a] == "•" for a in gpd.arrows)


def test_reflection_groupoid(reflection):
    gpd = reflection.groupoid
    # expand the action table by hand: e fixes everything, g swaps 1 and 3
    table = {("e", v): v for v in "0123"} | {("g", "0"): "0", ("g", "1"): "3", ("g", "2"): "2", ("g", "3"): "1"}
    assert len(gpd.arrows) == len(table) == 8
    for (g, x), y in table.items():
        assert gpd.src[(g, x)] == x and gpd.tgt[(g, x)] == y
    assert gpd.tgt[("g", "1")] == "3"
    assert gpd.check_axioms() == []


def test_standard_groupoids():
    Z3 = cyclic_group(3)
    p = point_groupoid(Z3)
    assert (len(p.objects), len(p.arrows)) == (1, 3)
    u = unit_groupoid(["x"])
    assert (len(u.objects), len(u.arrows)) == (1, 1)
    assert standard_groupoid("point", Z3).arrows == p.arrows
    with pytest.raises(InvalidStructure):
        standard_groupoid("nonsense")


def test_conjugation_groupoid_of_s3():
    S3 = symmetric_group(3)
    H = S3.subgroup(["123", "213"])
    gpd = conjugation_groupoid(H, S3)
    assert (len(gpd.objects), len(gpd.arrows)) == (6, 12)
    for h, x in gpd.arrows:
        assert gpd.tgt[(h, x)] == S3.prod(h, x, S3.inv(h))
    assert gpd.check_axioms() == []


def test_isotropy(reflection):
    gpd = reflection.groupoid
    assert len(isotropy(gpd, "0")) == 2
    assert len(isotropy(gpd, "1")) == 1


def test_skeletons(reflection):
    u = unit_groupoid(["a", "b"])
    assert [(r, len(g)) for r, g in skeleton(u)] == [("a", 1), ("b", 1)]
    S3 = symmetric_group(3)
    (rep, iso), = skeleton(point_groupoid(S3))
    assert rep == "•" and len(iso) == 6 and not iso.is_abelian()
    sk = skeleton(reflection.groupoid)
    assert reflection.groupoid.components() == [("0",), ("1", "3"), ("2",)]
    assert [len(g) for _, g in sk] == [2, 1, 2]


def test_equivalence_certificates():
    S3 = symmetric_group(3)
    c = conjugation_groupoid(S3, S3)
    cert = are_equivalent(c, c)
    assert cert.equivalent
    assert all(a == b for a, b, _ in cert.matching)
    assert not are_equivalent(point_groupoid(cyclic_group(2)), point_groupoid(cyclic_group(3))).equivalent
    assert not are_equivalent(unit_groupoid(["a"]), unit_groupoid(["a", "b"])).equivalent


def test_square_action_matches_conjugation():
    Z3 = cyclic_group(3)
    GG = direct_product(Z3, Z3)
    carrier = [(h, l) for h in Z3.elements for l in Z3.elements]

    def act(ab, hl):
        (a, b), (h, l) = ab, hl
        ai = Z3.inv(a)
        return (Z3.prod(b, h, ai), Z3.prod(b, l, ai))

    sq = translation_groupoid(make_action(GG, carrier, act))
    assert are_equivalent(sq, conjugation_groupoid(Z3, Z3)).equivalent


def test_isotropy_isomorphism_needed():
    Z4, V = cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2))
    assert not are_equivalent(point_groupoid(Z4), point_groupoid(V)).equivalent
    assert are_equivalent(multiplication_groupoid(Z4, Z4), unit_groupoid(["x"])).equivalent


def test_check_axioms_reports_a_broken_composition(reflection):
    gpd = reflection.groupoid
    comp = dict(gpd.comp)
    comp[(("g", "3"), ("g", "1"))] = ("g", "1")
    broken = FiniteGroupoid(gpd.objects, gpd.arrows, gpd.src, gpd.tgt, comp, gpd.unit, gpd.inv)
    assert broken.check_axioms() != []
    with pytest.raises(InvalidStructure):
        broken.validate()
