"""Command line front end: ``grpd <command> --instance FILE [--grid T] [--out FILE]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BoundExceeded, GrpdError, InvalidStructure, LiftError
from .gpath import (chi, chi_witness, colimit_normal_form, gpath_equivalent_direct, induced_map, iso_check,
                    lift_gpath, map_gpath, gpath_act)
from .groupoid import FiniteGroupoid, TranslationGroupoid, skeleton
from .homotopy import check_homotopy, connected_case_report, constant_homotopy, contraction_homotopy
from .instance import SCHEMA_VERSION, InputError, Instance, load_corpus, load_instance
from .labels import render, to_json
from .loopbase import (PathContext, based_groupoid, check_based_action_trivial, diagonal_map, evaluation_map,
                       free_loop_groupoid, omega_via_path_loop, trivial_isotropy)
from .morphism import (EquivariantMap, groupoid_pullback, is_essential_equivalence, is_isomorphism,
                       pullback_comparison, translation_pullback)
from .suite import run_all

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _isotropy_json(gpd: FiniteGroupoid, iso) -> dict:
    if isinstance(gpd, TranslationGroupoid):
        elements = [to_json(a[0]) for a in iso.elements]
    else:
        elements = [render(a) for a in iso.elements]
    return {"order": len(iso), "abelian": iso.is_abelian(), "elements": elements}


def skeleton_json(gpd: FiniteGroupoid) -> dict:
    return {"objects": len(gpd.objects), "arrows": len(gpd.arrows),
            "classes": [{"representative": render(rep), "isotropy": _isotropy_json(gpd, iso)}
                        for rep, iso in skeleton(gpd)]}


def _pick(table: dict, name: str | None, what: str) -> dict:
    if name is None:
        return dict(sorted(table.items()))
    if name not in table:
        raise InputError(f"unknown {what} {name!r}; known: {sorted(table)}")
    return {name: table[name]}


def _basepoints(inst: Instance, args) -> tuple:
    named = list(inst.basepoints.values()) or [inst.gaction.graph.vertices[0]]

    def resolve(v, default):
        if v is None:
            return default
        v = inst.basepoints.get(v, v)
        if v not in inst.gaction.graph.vertices:
            raise InputError(f"{v!r} is neither a basepoint name nor a vertex")
        return v

    return resolve(args.x, named[0]), resolve(args.y, named[-1])


def cmd_validate(inst: Instance, T: int, args) -> tuple[bool, dict]:
    errs = inst.gaction.groupoid.check_axioms()
    errs += [f"path {k}: not a path in the graph" for k, p in sorted(inst.paths.items())
             if not p.is_valid_in(inst.gaction.graph)]
    for k, p in sorted(inst.gpaths.items()):
        errs += [f"gpath {k}: {e}" for e in p.check()]
    for k, nm in sorted(inst.maps.items()):
        errs += [f"map {k}: {e}" for e in nm.map.check()]
    summary = {"group_order": len(inst.group), "vertices": len(inst.gaction.graph.vertices),
               "edges": len(inst.gaction.graph.edges), "paths": len(inst.paths),
               "gpaths": len(inst.gpaths), "maps": len(inst.maps)}
    return not errs, {"errors": errs, "summary": summary}


def cmd_orbits(inst: Instance, T: int, args) -> tuple[bool, dict]:
    act = inst.gaction.action
    orbits = [{"orbit": list(o), "stabilizer": act.stabilizer(o[0])} for o in act.orbits()]
    return True, {"orbits": orbits, "free": act.is_free()}


def cmd_skeleton(inst: Instance, T: int, args) -> tuple[bool, dict]:
    ctx = PathContext(inst.gaction, T)
    return True, {"space": skeleton_json(inst.gaction.groupoid), "paths": skeleton_json(ctx.paths)}


def cmd_normalize(inst: Instance, T: int, args) -> tuple[bool, dict]:
    out = {}
    for k, p in _pick(inst.gpaths, args.gpath, "G-path").items():
        w = chi_witness(p)
        ok = colimit_normal_form(gpath_act(w, p)).pieces == (chi(p),)
        out[k] = {"gpath": p.to_json(), "normal_form": colimit_normal_form(p).to_json(),
                  "straightened": chi(p).to_json(), "witness": to_json(w), "witness_ok": ok}
    return all(v["witness_ok"] for v in out.values()), {"gpaths": out}


def cmd_equiv(inst: Instance, T: int, args) -> tuple[bool, dict]:
    if args.a or args.b:
        if not (args.a and args.b):
            raise InputError("give both --a and --b")
        for n in (args.a, args.b):
            if n not in inst.gpaths:
                raise InputError(f"unknown G-path {n!r}")
        pairs = {f"{args.a}~{args.b}": (args.a, args.b)}
    else:
        pairs = _pick(inst.pairs, args.pair, "pair")
    out = {}
    ok = True
    for k, (na, nb) in pairs.items():
        a, b = inst.gpaths[na], inst.gpaths[nb]
        g = iso_check(a, b)
        w = gpath_equivalent_direct(a, b)
        agree = (g is None) == (w is None)
        if not agree:
            print(f"grpd: the two equivalence tests disagree on {k}", file=sys.stderr)
        ok = ok and agree and (w is None or w.check())
        out[k] = {"left": na, "right": nb, "equivalent": g is not None, "routes_agree": agree,
                  "straightening_witness": to_json(g),
                  "direct_witness": None if w is None else {
                      "elements": to_json(w.elements), "left": w.left.to_json(), "right": w.right.to_json()}}
    return ok, {"pairs": out}


def cmd_loops(inst: Instance, T: int, args) -> tuple[bool, dict]:
    ctx = PathContext(inst.gaction, T)
    loops = free_loop_groupoid(ctx)
    sk = skeleton_json(loops.reduced)
    return loops.certificate.equivalent, {
        "classes": len(sk["classes"]), "reduced": sk,
        "pullback": loops.pullback.groupoid.summary(), "forms_equivalent": loops.certificate.to_json()}


def _based_summary(b) -> dict:
    out = {"reduced": skeleton_json(b.reduced), "pullback": b.pullback.groupoid.summary(),
           "trivial_isotropy": trivial_isotropy(b.pullback.groupoid), "forms_equivalent": b.certificate.equivalent}
    if b.alternative_certificate is not None:
        out["alternative_equivalent"] = b.alternative_certificate.equivalent
    return out


def cmd_based(inst: Instance, T: int, args) -> tuple[bool, dict]:
    ctx = PathContext(inst.gaction, T)
    x, y = _basepoints(inst, args)
    res = {"x": x, "y": y}
    for kind in ("omega_xy", "omega_x", "path_x"):
        res[kind] = _based_summary(based_groupoid(ctx, kind, x, y))
    res["omega_xy"]["action_trivial"] = not check_based_action_trivial(ctx, x, y)
    _, cert = omega_via_path_loop(ctx, x, y)
    res["omega_xy"]["via_path_loop"] = cert.equivalent
    ok = res["omega_xy"]["trivial_isotropy"] and res["omega_x"]["trivial_isotropy"] \
        and res["omega_xy"]["action_trivial"] and cert.equivalent \
        and all(res[k]["forms_equivalent"] for k in ("omega_xy", "omega_x", "path_x")) \
        and res["omega_x"]["alternative_equivalent"]
    return ok, res


def _pullback_report(psi: EquivariantMap, phi: EquivariantMap) -> dict:
    tp = translation_pullback(psi, phi)
    gp = groupoid_pullback(psi.strict(), phi.strict())
    return {"group_order": len(tp.groupoid.group),
            "expected_group_order": len(psi.source.group) * len(phi.source.group),
            "translation": tp.groupoid.summary(), "pullback": gp.groupoid.summary(),
            "projections_ok": not tp.pi1.check() and not tp.pi2.check(),
            "square_ok": not gp.square.check(),
            "comparison_isomorphism": is_isomorphism(pullback_comparison(tp, gp, psi, phi))}


def cmd_pullback(inst: Instance, T: int, args) -> tuple[bool, dict]:
    ctx = PathContext(inst.gaction, T)
    res = {"diagonal_evaluation": _pullback_report(diagonal_map(ctx), evaluation_map(ctx))}
    for k, nm in sorted(inst.maps.items()):
        res[f"map:{k}"] = _pullback_report(nm.map, EquivariantMap.identity(nm.target.gaction.groupoid))
    ok = all(r["group_order"] == r["expected_group_order"] and r["projections_ok"] and r["square_ok"]
             and r["comparison_isomorphism"] for r in res.values())
    return ok, res


def cmd_morita(inst: Instance, T: int, args) -> tuple[bool, dict]:
    if not inst.maps:
        raise InputError("instance has no maps")
    out = {}
    for k, nm in _pick(inst.maps, args.map, "map").items():
        base = is_essential_equivalence(nm.map.strict())
        ind = induced_map(nm.map, inst.gaction, nm.target.gaction, T)
        rep = is_essential_equivalence(ind.strict())
        out[k] = {"map": base.to_json(), "paths": rep.to_json()}
    return all(v["map"]["essential_equivalence"] and v["paths"]["essential_equivalence"]
               for v in out.values()), {"maps": out}


def cmd_lift(inst: Instance, T: int, args) -> tuple[bool, dict]:
    if not inst.maps:
        raise InputError("instance has no maps")
    out = {}
    ok = True
    for k, nm in _pick(inst.maps, args.map, "map").items():
        for gname, gp in _pick(nm.target.gpaths, args.gpath, "G-path").items():
            try:
                res = lift_gpath(nm.map, gp, inst.gaction)
            except LiftError as exc:
                ok = False
                out[f"{k}:{gname}"] = {"lifted": False, "reason": str(exc)}
                continue
            pushed = gpath_act(res.witness, map_gpath(nm.map, res.gpath, nm.target.gaction))
            good = pushed == res.target and iso_check(res.target, gp) is not None
            ok = ok and good
            out[f"{k}:{gname}"] = {"lifted": True, "lift": res.gpath.to_json(), "witness": to_json(res.witness),
                                   "verified": good}
    return ok, {"lifts": out}


def cmd_homotopy(inst: Instance, T: int, args) -> tuple[bool, dict]:
    ga = inst.gaction
    G, space = ga.group, ga.groupoid
    ident = EquivariantMap.identity(space)
    rows = {}
    ok = True
    for h in G.elements:
        g = EquivariantMap(space, space, {k: G.conj(h, k) for k in G.elements},
                           {z: ga.action(h, z) for z in space.objects})
        rep = connected_case_report(ident, g, ga.graph)
        w = constant_homotopy(ident, g, T)
        errs = ["no witness"] if w is None else check_homotopy(ident, g, w, ga.graph, T)
        rep["homotopy_errors"] = errs
        good = rep["exists"] and not errs and all(rep.get(k, True) for k in ("constant_ok", "translate_ok",
                                                                            "conjugate_ok"))
        ok = ok and good
        rows[str(h)] = rep
    con = contraction_homotopy(PathContext(ga, T))
    ok = ok and con.ok
    return ok, {"translations": rows, "contraction": {"ok": con.ok, "errors": con.errors[:10],
                                                      "stages": len(con.stages)}}


def cmd_report_all(inst: Instance | None, T: int, args) -> tuple[bool, dict]:
    results = run_all(load_corpus())
    return all(r.ok for r in results), {"criteria": [r.to_json() for r in results]}


COMMANDS = {
    "validate": cmd_validate, "orbits": cmd_orbits, "skeleton": cmd_skeleton, "normalize": cmd_normalize,
    "equiv": cmd_equiv, "loops": cmd_loops, "based": cmd_based, "pullback": cmd_pullback,
    "morita": cmd_morita, "lift": cmd_lift, "homotopy-check": cmd_homotopy, "report-all": cmd_report_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grpd", description="Path and loop groupoids of finite group actions.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--instance", help="instance JSON file (optional for report-all)")
    p.add_argument("--grid", type=int, help="number of unit steps T (default: the instance's grid)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--gpath", help="G-path name for normalize and lift")
    p.add_argument("--pair", help="pair name for equiv")
    p.add_argument("--a", help="first G-path for equiv")
    p.add_argument("--b", help="second G-path for equiv")
    p.add_argument("--map", help="map name for morita and lift")
    p.add_argument("--x", help="first basepoint (name or vertex) for based")
    p.add_argument("--y", help="second basepoint (name or vertex) for based")
    return p


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(args: argparse.Namespace) -> tuple[int, dict | None]:
    report = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        inst = None
        if args.instance:
            inst = load_instance(args.instance)
        elif args.command != "report-all":
            raise InputError("--instance is required")
        T = args.grid if args.grid is not None else (inst.grid if inst else None)
        if T is not None and T < 1:
            raise InputError("--grid must be at least 1")
        report.update({"instance": inst.name if inst else None, "grid": T})
        ok, result = COMMANDS[args.command](inst, T, args)
    except (InputError, BoundExceeded) as exc:
        print(f"grpd: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    except (InvalidStructure, GrpdError) as exc:
        report.update({"ok": False, "error": str(exc)})
        return EXIT_VIOLATION, report
    report.update({"ok": ok, "result": result})
    return (EXIT_OK if ok else EXIT_VIOLATION), report


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, report = run(args)
    if report is not None:
        try:
            _emit(report, args.out)
        except OSError as exc:
            print(f"grpd: cannot write report: {exc}", file=sys.stderr)
            return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
