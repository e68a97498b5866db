"""The acceptance checks, runnable from tests and from ``grpd report-all``.

Each check returns a ``CheckResult`` whose details are deterministic, so two
runs of the suite serialize to identical JSON.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .gpath import (build_Y_alpha, check_Y_alpha, chi, chi_inverse, chi_witness, colimit_normal_form,
                    enumerate_gpaths, gpath_act, gpath_equivalent_direct, induced_map, iso_check,
                    random_gpath)
from .groupoid import (are_equivalent, conjugation_groupoid, multiplication_groupoid, point_groupoid,
                       unit_groupoid)
from .groups import cyclic_group, symmetric_group, trivial_action
from .homotopy import (check_homotopy, connected_case_report, constant_homotopy, contraction_homotopy,
                       equivariant_nt_exists)
from .instance import Instance, load_corpus
from .labels import render
from .loopbase import (PathContext, based_groupoid, check_based_action_trivial, diagonal_map,
                       evaluation_map, free_loop_groupoid, omega_via_path_loop, reduced_based_paths,
                       trivial_isotropy)
from .morphism import (EquivariantMap, is_essential_equivalence, is_isomorphism, pullback_comparison,
                       groupoid_pullback, translation_pullback)
from .space import GraphAction, SpaceGraph, act_on_path, enumerate_paths, interval_groupoid, orbit_quotient

ARROW_LIMIT = 1000
RANDOM_GPATHS = 50
SEED = 20240601


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"number": self.number, "title": self.title, "ok": self.ok, "details": self.details}


def point_action(group) -> GraphAction:
    return GraphAction(SpaceGraph(("•",), frozenset()), trivial_action(group, ["•"]))


def _instances(corpus) -> list[tuple[str, GraphAction, Instance]]:
    return [(name, inst.gaction, inst) for name, inst in corpus.items()]


def check_axioms(corpus) -> CheckResult:
    checked, skipped, failures = 0, 0, []

    def run(label, gpd):
        nonlocal checked, skipped
        if len(gpd.arrows) > ARROW_LIMIT:
            skipped += 1
            return
        errs = gpd.check_axioms()
        checked += 1
        if errs:
            failures.append({"groupoid": label, "error": errs[0]})

    S3 = symmetric_group(3)
    sub = S3.subgroup(["123", "213"])
    run("conjugation Z2<=S3", conjugation_groupoid(sub, S3))
    run("multiplication Z2<=S3", multiplication_groupoid(sub, S3))
    run("unit {0,1,2}", unit_groupoid(["0", "1", "2"]))
    for name, ga, inst in _instances(corpus):
        run(f"{name}: space", ga.groupoid)
        for T in (1, 2):
            ctx = PathContext(ga, T)
            run(f"{name}: paths T={T}", ctx.paths)
            run(f"{name}: square T={T}", ctx.square)
        ctx = PathContext(ga, inst.grid)
        loops = free_loop_groupoid(ctx)
        run(f"{name}: loops pullback", loops.pullback.groupoid)
        run(f"{name}: loops reduced", loops.reduced)
        pts = list(inst.basepoints.values()) or [ga.graph.vertices[0]]
        x, y = pts[0], pts[-1]
        for kind in ("omega_xy", "omega_x", "path_x"):
            b = based_groupoid(ctx, kind, x, y)
            run(f"{name}: {kind} pullback", b.pullback.groupoid)
            run(f"{name}: {kind} reduced", b.reduced)
            if b.alternative is not None:
                run(f"{name}: {kind} alternative", b.alternative.groupoid)
        tp = translation_pullback(diagonal_map(ctx), evaluation_map(ctx))
        run(f"{name}: translation pullback", tp.groupoid)
        for gname, p in sorted(inst.gpaths.items()):
            run(f"{name}: thin groupoid of {gname}", interval_groupoid(p.subdivision))
            run(f"{name}: Y of {gname}", build_Y_alpha(p).groupoid)
    return CheckResult(1, "groupoid axioms hold for every constructed groupoid", not failures,
                       {"checked": checked, "skipped_over_limit": skipped, "failures": failures})


def check_iso_vs_direct(corpus) -> CheckResult:
    rows = []
    ok = True
    for name in ("reflection-c4", "rotation-c6"):
        ga = corpus[name].gaction
        perms = ga.action.perms
        for T in (1, 2, 3):
            gps = enumerate_gpaths(ga, T)
            agree = disagree = positive = bad_witness = 0
            for a in gps:
                for b in gps:
                    g = iso_check(a, b)
                    w = gpath_equivalent_direct(a, b)
                    if (g is None) != (w is None):
                        disagree += 1
                        continue
                    agree += 1
                    if g is not None:
                        positive += 1
                        if act_on_path(ga.action, g, chi(a)) != chi(b) or not w.check() \
                                or colimit_normal_form(w.left) != colimit_normal_form(a) \
                                or colimit_normal_form(w.right) != colimit_normal_form(b):
                            bad_witness += 1
            ok = ok and disagree == 0 and bad_witness == 0
            rows.append({"instance": name, "T": T, "gpaths": len(gps), "pairs": len(gps) ** 2,
                         "equivalent_pairs": positive, "disagreements": disagree,
                         "invalid_witnesses": bad_witness})
    return CheckResult(2, "straightening test agrees with the direct search on all pairs", ok, {"runs": rows})


def check_round_trips(corpus) -> CheckResult:
    rows = []
    ok = True
    for name, ga, _ in _instances(corpus):
        for T in (1, 2, 3):
            paths = enumerate_paths(ga.graph, T)
            bad_paths = sum(chi(chi_inverse(a, ga)) != a for a in paths)
            bad_gpaths = 0
            gps = enumerate_gpaths(ga, T)
            for p in gps:
                q = chi_inverse(chi(p), ga)
                moved = gpath_act(chi_witness(p), p)
                if colimit_normal_form(moved) != q or iso_check(p, q) is None:
                    bad_gpaths += 1
            ok = ok and bad_paths == 0 and bad_gpaths == 0
            rows.append({"instance": name, "T": T, "paths": len(paths), "gpaths": len(gps),
                         "path_failures": bad_paths, "gpath_failures": bad_gpaths})
    return CheckResult(3, "straightening round trips and explicit witness", ok, {"runs": rows})


def check_Y(corpus) -> CheckResult:
    rng = random.Random(SEED)
    rows = []
    ok = True
    for name, ga, _ in _instances(corpus):
        failures = []
        for _ in range(RANDOM_GPATHS):
            T = rng.randint(1, 4)
            p = random_gpath(ga, T, rng)
            y = build_Y_alpha(p)
            errs = check_Y_alpha(y)
            c = chi(p)
            e = ga.group.identity
            if any(y.to_space(y.gamma_inverse[(e, r)]) != c.at(r) for r in range(T + 1)):
                errs.append("Y does not reproduce the straightened path")
            if errs:
                failures.append({"gpath": render(p), "error": errs[0]})
        ok = ok and not failures
        rows.append({"instance": name, "samples": RANDOM_GPATHS, "failures": failures})
    return CheckResult(4, "Y construction: size, essential equivalence and bijection", ok, {"runs": rows})


def check_morita(corpus) -> CheckResult:
    inst = corpus["quotient-c6-c3"]
    nm = inst.maps["quotient"]
    f = nm.map
    rows = [{"T": 0, "essential_equivalence": is_essential_equivalence(f.strict()).ok}]
    for T in (1, 2, 3):
        ind = induced_map(f, inst.gaction, nm.target.gaction, T)
        rep = is_essential_equivalence(ind.strict())
        rows.append({"T": T, "functor_errors": len(ind.check()), "essential_equivalence": rep.ok,
                     "source_objects": len(ind.source.objects), "target_objects": len(ind.target.objects)})
    ok = all(r["essential_equivalence"] and not r.get("functor_errors") for r in rows)
    return CheckResult(5, "induced maps on path groupoids preserve essential equivalences", ok, {"runs": rows})


def check_point_table(corpus) -> CheckResult:
    rows = []
    ok = True
    for gname, G in (("Z2", cyclic_group(2, "g")), ("Z3", cyclic_group(3)), ("S3", symmetric_group(3))):
        ga = point_action(G)
        for T in (1, 2, 3):
            ctx = PathContext(ga, T)
            loops = free_loop_groupoid(ctx)
            omega = based_groupoid(ctx, "omega_x", "•")
            path = based_groupoid(ctx, "path_x", "•")
            conj = conjugation_groupoid(G, G)
            disc = unit_groupoid(G.elements)
            mult = multiplication_groupoid(G, G)
            r = {
                "group": gname, "T": T,
                "paths~point": are_equivalent(ctx.paths, point_groupoid(G)).equivalent,
                "loops~conjugation": are_equivalent(loops.reduced, conj).equivalent
                and are_equivalent(loops.pullback.groupoid, conj).equivalent,
                "omega~discrete": are_equivalent(omega.reduced, disc).equivalent
                and are_equivalent(omega.pullback.groupoid, disc).equivalent
                and are_equivalent(omega.alternative.groupoid, disc).equivalent,
                "path_space~multiplication": are_equivalent(path.reduced, mult).equivalent
                and are_equivalent(path.pullback.groupoid, mult).equivalent,
            }
            ok = ok and all(v for k, v in r.items() if k not in ("group", "T"))
            rows.append(r)
    return CheckResult(6, "point groupoid table", ok, {"runs": rows})


def check_free_collapse(corpus) -> CheckResult:
    ga = corpus["rotation-c6"].gaction
    qa, q = orbit_quotient(ga)
    rows = []
    ok = True
    for T in (1, 2, 3):
        c1, c2 = PathContext(ga, T), PathContext(qa, T)
        r = {"T": T, "paths": are_equivalent(c1.paths, c2.paths).equivalent}
        l1, l2 = free_loop_groupoid(c1), free_loop_groupoid(c2)
        r["loops"] = are_equivalent(l1.reduced, l2.reduced).equivalent and \
            are_equivalent(l1.pullback.groupoid, l2.pullback.groupoid).equivalent
        based_ok = True
        for x in ga.graph.vertices:
            qx = q(x)
            p1, p2 = based_groupoid(c1, "path_x", x), based_groupoid(c2, "path_x", qx)
            based_ok &= are_equivalent(p1.reduced, p2.reduced).equivalent
            o1, o2 = based_groupoid(c1, "omega_x", x), based_groupoid(c2, "omega_x", qx)
            based_ok &= are_equivalent(o1.pullback.groupoid, o2.pullback.groupoid).equivalent
            for y in ga.graph.vertices:
                based_ok &= are_equivalent(reduced_based_paths(c1, x, y),
                                           reduced_based_paths(c2, qx, q(y))).equivalent
        r["based"] = based_ok
        ok = ok and r["paths"] and r["loops"] and based_ok
        rows.append(r)
    return CheckResult(7, "free action: constructions match those of the orbit graph", ok, {"runs": rows})


def _no_arrow(gpd, a, b) -> bool:
    return not any(gpd.src[h] == a and gpd.tgt[h] == b for h in gpd.arrows)


def check_divergence(corpus) -> CheckResult:
    inst = corpus["reflection-c4"]
    ga = inst.gaction
    G = ga.group
    a, b = (inst.gpaths[n] for n in inst.pairs["fixed_point_loop"])
    alpha = chi(b)
    g = a.connectors[-1]
    T = b.T
    ctx = PathContext(ga, T)
    free_paths = iso_check(a, b) is not None and gpath_equivalent_direct(a, b) is not None
    loops = free_loop_groupoid(ctx)
    red = loops.reduced
    la, lb = (alpha, g), (alpha, G.identity)
    loops_distinct = la in red.objects and lb in red.objects and _no_arrow(red, la, lb) and _no_arrow(red, lb, la)
    x = alpha.samples[0]
    e = G.identity

    def pb_loop(h):
        return (x, ((e, G.inv(h)), (x, x)), alpha)

    pg = loops.pullback.groupoid
    loops_distinct &= pb_loop(g) in pg.objects and _no_arrow(pg, pb_loop(g), pb_loop(e)) \
        and _no_arrow(pg, pb_loop(e), pb_loop(g))
    y = alpha.samples[-1]
    om = based_groupoid(ctx, "omega_xy", x, y)
    ra, rb = (alpha, g), (alpha, e)
    based_distinct = ra in om.reduced.objects and rb in om.reduced.objects and \
        _no_arrow(om.reduced, ra, rb) and _no_arrow(om.reduced, rb, ra)
    oa, ob = ("•", ((e, g), (x, y)), alpha), ("•", ((e, e), (x, y)), alpha)
    based_distinct &= oa in om.pullback.groupoid.objects and _no_arrow(om.pullback.groupoid, oa, ob) \
        and _no_arrow(om.pullback.groupoid, ob, oa)
    ok = free_paths and loops_distinct and based_distinct
    return CheckResult(8, "equivalent as free paths, distinct as loops and as based paths", ok,
                       {"pair": list(inst.pairs["fixed_point_loop"]), "free_paths_equivalent": free_paths,
                        "loops_not_isomorphic": loops_distinct, "based_not_isomorphic": based_distinct})


def check_based_trivial(corpus) -> CheckResult:
    rows = []
    ok = True
    for name, ga, inst in _instances(corpus):
        ctx = PathContext(ga, inst.grid)
        bad = []
        vs = ga.graph.vertices
        for x in vs:
            for y in vs:
                om = based_groupoid(ctx, "omega_xy", x, y)
                if not trivial_isotropy(om.pullback.groupoid) or not trivial_isotropy(om.reduced) \
                        or check_based_action_trivial(ctx, x, y) or not om.certificate.equivalent:
                    bad.append([x, y])
        ok = ok and not bad
        rows.append({"instance": name, "pairs": len(vs) ** 2, "failures": bad})
    return CheckResult(9, "based path groupoids have trivial isotropy", ok, {"runs": rows})


def check_pullbacks(corpus) -> CheckResult:
    rows = []
    ok = True
    for name, ga, inst in _instances(corpus):
        ctx = PathContext(ga, inst.grid)
        loops = free_loop_groupoid(ctx)
        pts = list(inst.basepoints.values()) or [ga.graph.vertices[0]]
        x, y = pts[0], pts[-1]
        _, cert = omega_via_path_loop(ctx, x, y)
        om_x = based_groupoid(ctx, "omega_x", x)
        d, ev = diagonal_map(ctx), evaluation_map(ctx)
        tp = translation_pullback(d, ev)
        gp = groupoid_pullback(d.strict(), ev.strict())
        GG = len(ga.group) ** 2
        r = {"instance": name,
             "loop_forms": loops.certificate.equivalent,
             "omega_via_path_loop": cert.equivalent,
             "omega_x_presentations": om_x.alternative_certificate.equivalent,
             "translation_group_order": len(tp.groupoid.group) == GG,
             "projections": not tp.pi1.check() and not tp.pi2.check(),
             "comparison_isomorphism": is_isomorphism(pullback_comparison(tp, gp, d, ev)),
             "square_commutes": not gp.square.check()}
        if name == "quotient-c6-c3":
            nm = inst.maps["quotient"]
            ident = EquivariantMap.identity(nm.target.gaction.groupoid)
            tq = translation_pullback(nm.map, ident)
            gq = groupoid_pullback(nm.map.strict(), ident.strict())
            r["map_pullback_group"] = len(tq.groupoid.group) == len(ga.group) * len(nm.target.group)
            r["map_pullback_comparison"] = is_isomorphism(pullback_comparison(tq, gq, nm.map, ident))
        ok = ok and all(v for k, v in r.items() if k != "instance")
        rows.append(r)
    return CheckResult(10, "pullback constructions agree", ok, {"runs": rows})


def check_homotopy_layer(corpus) -> CheckResult:
    rows = []
    ok = True
    for name, ga, inst in _instances(corpus):
        G = ga.group
        space = ga.groupoid
        ident = EquivariantMap.identity(space)
        connected = []
        for h in G.elements:
            g = EquivariantMap(space, space, {k: G.conj(h, k) for k in G.elements},
                               {z: ga.action(h, z) for z in space.objects})
            rep = connected_case_report(ident, g, ga.graph)
            w = constant_homotopy(ident, g, inst.grid)
            good = rep["exists"] and rep.get("constant_ok", True) and rep.get("translate_ok", True) \
                and rep.get("conjugate_ok", True) and w is not None \
                and not check_homotopy(ident, g, w, ga.graph, inst.grid)
            connected.append(good)
        # a map whose group part is trivial is related to the identity only if G acts through a trivial group
        trivial_hom = {k: G.identity for k in G.elements}
        fixed = all(ga.action(k, z) == z for k in G.elements for z in space.objects)
        if fixed:
            g0 = EquivariantMap(space, space, trivial_hom, {z: z for z in space.objects})
            neg_ok = (equivariant_nt_exists(ident, g0, ga.graph) is None) == (len(G) > 1)
        else:
            neg_ok = True
        contraction = []
        for T in (1, 2, 3, 4):
            res = contraction_homotopy(PathContext(ga, T))
            contraction.append(res.ok)
        r = {"instance": name, "translations": all(connected), "non_conjugate_absent": neg_ok,
             "contraction": contraction}
        ok = ok and all(connected) and neg_ok and all(contraction)
        rows.append(r)
    return CheckResult(11, "homotopy layer", ok, {"runs": rows})


CHECKS = (check_axioms, check_iso_vs_direct, check_round_trips, check_Y, check_morita, check_point_table,
          check_free_collapse, check_divergence, check_based_trivial, check_pullbacks, check_homotopy_layer)


def run_all(corpus=None) -> list[CheckResult]:
    corpus = corpus or load_corpus()
    return [c(corpus) for c in CHECKS]
