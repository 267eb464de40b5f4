"""Command line front end over the presentation file format.

Exit codes: 0 verified / succeeded, 1 mathematical failure or refuted
check (the witness appears in the output), 2 usage or parse error,
3 resource budget exceeded.  Identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .blowup import (automatic_member, automatic_truncation, check_constancy,
                     neron_blowup, partial_blowup, standard_sequence,
                     strict_transform)
from .config import DEFAULT_LIMITS, Limits
from .dgal import (check_gauge, formal_solution, galois_diagnostic,
                   triviality_mod)
from .errors import NeronError, ParseError, ResourceLimit, UndefinedName
from .groebner import Ideal
from .hopf import (check_flat, check_hopf, check_morphism, prune, reduce_mod,
                   special_fibre)
from .images import image_hopf, saturated_image, triptych
from .parser import (RepBlock, parse, parse_fraction, parse_matrix,
                     parse_poly, parse_poly_list, print_group, print_laurent,
                     print_morphism, print_rep)
from .report import Report
from .reps import (RepMatrix, conormal_rep, direct_sum, identity_blowup_rep,
                   line_blowup_rep, rescaled_rep, scaling_conjugation_report,
                   stabilizer_ideal, validate_rep, verify_faithful)
from .ring import format_poly, format_scalar

SCHEMA_VERSION = 1


def _limits(args) -> Limits:
    return Limits(
        max_pairs=args.max_pairs if args.max_pairs else DEFAULT_LIMITS.max_pairs,
        max_degree=args.degree_bound if args.degree_bound else DEFAULT_LIMITS.max_degree)


def _load(args):
    with open(args.file, encoding="utf-8") as fh:
        return parse(fh.read())


def _group_json(h) -> dict:
    return {
        "name": h.name,
        "vars": list(h.ring.variables),
        "relations": [format_poly(g) for g in h.relations.generators],
        "comul": {v: format_poly(h.comul.images[v]) for v in h.ring.variables},
        "counit": {v: format_poly(h.counit.images[v]) for v in h.ring.variables},
        "antipode": {v: format_poly(h.antipode.images[v]) for v in h.ring.variables},
    }


def _morphism_json(m) -> dict:
    return {
        "name": m.name,
        "source": m.source.name,
        "target": m.target.name,
        "pullback": {v: format_poly(m.pullback.images[v])
                     for v in m.target.ring.variables},
    }


def _rows_json(entries):
    return [[format_poly(e) for e in row] for row in entries]


def _matrix_lines(entries, head: str):
    lines = [head]
    for row in entries:
        lines.append("  [" + ", ".join(format_poly(e) for e in row) + "]")
    return lines


def _finish(args, command: str, ok: bool, report: Report = None,
            data: dict = None, lines=None) -> int:
    if args.format == "json":
        envelope = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "ok": bool(ok),
            "report": report.to_json() if report is not None else None,
            "data": data or {},
        }
        sys.stdout.write(json.dumps(envelope, sort_keys=True, indent=2) + "\n")
    else:
        out = list(lines or [])
        if report is not None:
            out.extend(report.lines())
        if out:
            sys.stdout.write("\n".join(out) + "\n")
    return 0 if ok else 1


def _to_matrix(block: RepBlock) -> RepMatrix:
    return RepMatrix(block.group, block.entries, block.witness)


def _rep_payload(v: RepMatrix) -> dict:
    return {"group": v.group.name, "rows": _rows_json(v.entries),
            "witness": format_poly(v.det_inverse_witness)}


def cmd_check_hopf(args) -> int:
    h = _load(args).lookup("group", args.name)
    rep = check_hopf(h, _limits(args))
    return _finish(args, "check-hopf", rep.ok, rep, {"group": h.name})


def cmd_check_flat(args) -> int:
    h = _load(args).lookup("group", args.name)
    rep = check_flat(h, _limits(args))
    return _finish(args, "check-flat", rep.ok, rep, {"group": h.name})


def cmd_check_morphism(args) -> int:
    m = _load(args).lookup("morphism", args.name)
    rep = check_morphism(m, _limits(args))
    return _finish(args, "check-morphism", rep.ok, rep, {"morphism": m.name})


def cmd_fibre(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    fibre = special_fibre(h).rename(f"{h.name}_k")
    pruned, eliminated = prune(fibre, limits=limits)
    data = {"group": _group_json(pruned),
            "eliminated": {v: format_poly(f) for v, f in eliminated.items()}}
    return _finish(args, "fibre", True, None, data,
                   print_group(pruned).splitlines())


def cmd_reduce_mod(args) -> int:
    h = _load(args).lookup("group", args.name)
    res = reduce_mod(h, args.modulus, _limits(args))
    lines = [f"trivial modulo pi^{args.modulus + 1}: "
             + ("yes" if res.trivial else "no")]
    data = {"trivial": res.trivial, "level": args.modulus,
            "group": _group_json(res.presentation)}
    return _finish(args, "reduce-mod", res.trivial, res.report, data, lines)


def cmd_blowup(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    centre = Ideal(h.ring, parse_poly_list(args.centre, h.ring))
    b = neron_blowup(h, centre, limits=limits)
    lines = print_group(b.blown).splitlines()
    lines.append("centre: " + ", ".join(format_poly(g) for g in centre.generators))
    data = {"group": _group_json(b.blown),
            "centre": [format_poly(g) for g in centre.generators],
            "projection": _morphism_json(b.projection)}
    return _finish(args, "blowup", b.report.ok, b.report, data, lines)


def cmd_partial_blowup(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    sub = Ideal(h.ring, parse_poly_list(args.ideal, h.ring))
    b = partial_blowup(h, sub, args.level, limits=limits)
    lines = print_group(b.blown).splitlines()
    data = {"group": _group_json(b.blown), "level": args.level,
            "subgroup": [format_poly(g) for g in sub.generators],
            "projection": _morphism_json(b.projection)}
    return _finish(args, "partial-blowup", b.report.ok, b.report, data, lines)


def cmd_auto_trunc(args) -> int:
    h = _load(args).lookup("group", args.name)
    b = automatic_truncation(h, args.level, limits=_limits(args))
    lines = print_group(b.blown).splitlines()
    data = {"group": _group_json(b.blown), "level": b.level,
            "projection": _morphism_json(b.projection)}
    return _finish(args, "auto-trunc", b.report.ok, b.report, data, lines)


def cmd_auto_member(args) -> int:
    h = _load(args).lookup("group", args.name)
    numerator, power = parse_fraction(args.element, h.ring)
    member = automatic_member(h, numerator, power)
    eps = h.eps_of(numerator)
    lines = [f"element: {format_poly(numerator)} / pi^{power}",
             f"counit numerator: {format_scalar(eps)}",
             "member of the automatic blowup: " + ("yes" if member else "no")]
    data = {"member": member, "power": power,
            "numerator": format_poly(numerator),
            "counit_numerator": format_scalar(eps)}
    return _finish(args, "auto-member", member, None, data, lines)


def cmd_standard_seq(args) -> int:
    rho = _load(args).lookup("morphism", args.name)
    seq = standard_sequence(rho, args.depth, _limits(args))
    lines = []
    stages = []
    for i, stage in enumerate(seq.stages):
        centre = [format_poly(g) for g in stage.centre.generators]
        lines.append(f"stage {i + 1}: {stage.group.name}")
        lines.append("  centre: " + ", ".join(centre))
        stages.append({"group": stage.group.name,
                       "vars": list(stage.group.ring.variables),
                       "relations": [format_poly(g)
                                     for g in stage.group.relations.generators],
                       "centre": centre})
    lines.append(f"lifted morphism: {seq.lifted.name}")
    data = {"depth": seq.depth, "stages": stages,
            "lifted": _morphism_json(seq.lifted)}
    return _finish(args, "standard-seq", True, None, data, lines)


def cmd_strict_transform(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    centre = Ideal(h.ring, parse_poly_list(args.centre, h.ring))
    sub = Ideal(h.ring, parse_poly_list(args.ideal, h.ring))
    b = neron_blowup(h, centre, limits=limits)
    t = strict_transform(b, sub, limits)
    gens = [format_poly(g) for g in t.basis(limits)]
    lines = ["strict transform: " + ", ".join(gens)]
    data = {"generators": gens, "blown_group": b.blown.name}
    return _finish(args, "strict-transform", True, None, data, lines)


def cmd_check_constancy(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    sub = Ideal(h.ring, parse_poly_list(args.ideal, h.ring))
    rep = check_constancy(h, sub, args.depth, limits)
    return _finish(args, "check-constancy", rep.ok, rep,
                   {"group": h.name, "depth": args.depth})


def cmd_rep_validate(args) -> int:
    v = _to_matrix(_load(args).lookup("rep", args.name))
    rep = validate_rep(v, _limits(args))
    return _finish(args, "rep-validate", rep.ok, rep, _rep_payload(v),
                   _matrix_lines(v.entries, "matrix:"))


def cmd_rep_faithful(args) -> int:
    v = _to_matrix(_load(args).lookup("rep", args.name))
    res = verify_faithful(v, _limits(args))
    ok = res.verdict == "faithful"
    lines = [f"verdict: {res.verdict}"]
    if res.undecided:
        lines.append("undecided variables: " + ", ".join(res.undecided))
    data = {"verdict": res.verdict, "undecided": res.undecided}
    return _finish(args, "rep-faithful", ok, res.report, data, lines)


def cmd_rep_blowup_identity(args) -> int:
    block = _load(args).lookup("rep", args.name)
    limits = _limits(args)
    v = _to_matrix(block)
    b = automatic_truncation(block.group, args.level, limits=limits)
    doubled = identity_blowup_rep(v, b, limits)
    rep = validate_rep(doubled, limits)
    rep.extend(scaling_conjugation_report(v, b, doubled, limits))
    lines = _matrix_lines(doubled.entries, f"doubled matrix over {doubled.group.name}:")
    data = _rep_payload(doubled)
    data["level"] = args.level
    return _finish(args, "rep-blowup-identity", rep.ok, rep, data, lines)


def cmd_rep_blowup_line(args) -> int:
    block = _load(args).lookup("rep", args.name)
    limits = _limits(args)
    v = _to_matrix(block)
    b = neron_blowup(block.group, stabilizer_ideal(v, args.column), limits=limits)
    e = None
    if args.e_matrix:
        entries = parse_matrix(args.e_matrix, b.blown.ring)
        witness = (parse_poly(args.e_witness, b.blown.ring)
                   if args.e_witness else None)
        e = RepMatrix(b.blown, entries, witness)
    glued = line_blowup_rep(v, b, e, args.column, limits)
    rep = validate_rep(glued, limits)
    lines = _matrix_lines(glued.entries, f"glued matrix over {glued.group.name}:")
    data = _rep_payload(glued)
    data["column"] = args.column
    return _finish(args, "rep-blowup-line", rep.ok, rep, data, lines)


def cmd_rep_rescale(args) -> int:
    block = _load(args).lookup("rep", args.name)
    limits = _limits(args)
    v = _to_matrix(block)
    b = neron_blowup(block.group, stabilizer_ideal(v, args.column), limits=limits)
    rescaled, summed = rescaled_rep(v, b, args.column, limits)
    rep = validate_rep(rescaled, limits)
    rep.extend(validate_rep(summed, limits))
    lines = _matrix_lines(rescaled.entries,
                          f"rescaled matrix over {rescaled.group.name}:")
    lines.extend(_matrix_lines(summed.entries, "direct sum with the original:"))
    data = {"rescaled": _rep_payload(rescaled), "sum": _rep_payload(summed),
            "column": args.column}
    return _finish(args, "rep-rescale", rep.ok, rep, data, lines)


def cmd_rep_sum(args) -> int:
    pf = _load(args)
    v = _to_matrix(pf.lookup("rep", args.left))
    w = _to_matrix(pf.lookup("rep", args.right))
    s = direct_sum(v, w)
    rep = validate_rep(s, _limits(args))
    lines = _matrix_lines(s.entries, f"direct sum over {s.group.name}:")
    return _finish(args, "rep-sum", rep.ok, rep, _rep_payload(s), lines)


def cmd_conormal(args) -> int:
    h = _load(args).lookup("group", args.name)
    limits = _limits(args)
    gk = special_fibre(h).rename(f"{h.name}_k")
    sub = Ideal(gk.ring, parse_poly_list(args.ideal, gk.ring))
    data_obj = conormal_rep(gk, sub, limits)
    v = data_obj.rep()
    rep = validate_rep(v, limits)
    basis = [format_poly(f) for f in data_obj.basis]
    lines = ["conormal basis: " + ", ".join(basis)]
    lines.extend(_matrix_lines(data_obj.matrix,
                               f"coaction matrix over {data_obj.group.name}:"))
    data = {"basis": basis, "group": _group_json(data_obj.group),
            "rows": _rows_json(data_obj.matrix)}
    return _finish(args, "conormal", rep.ok, rep, data, lines)


def cmd_image(args) -> int:
    rho = _load(args).lookup("morphism", args.name)
    res = image_hopf(rho, _limits(args))
    lines = print_group(res.group).splitlines()
    data = {"group": _group_json(res.group),
            "embed": _morphism_json(res.embed),
            "cover": _morphism_json(res.cover)}
    return _finish(args, "image", True, None, data, lines)


def cmd_diptych(args) -> int:
    rho = _load(args).lookup("morphism", args.name)
    d = saturated_image(rho, args.steps, _limits(args))
    lines = []
    stages = []
    for stage in [d.image.group] + d.stages:
        lines.append(f"stage: {stage.name}  vars: "
                     + ", ".join(stage.ring.variables))
        stages.append(_group_json(stage))
    lines.append("stabilized: " + ("yes" if d.stabilized else "no"))
    ok = d.report.ok and d.stabilized
    data = {"stages": stages, "stabilized": d.stabilized}
    return _finish(args, "diptych", ok, d.report, data, lines)


def cmd_triptych(args) -> int:
    rho = _load(args).lookup("morphism", args.name)
    t = triptych(rho, args.steps, _limits(args))
    lines = []
    for h in (t.saturated_fibre, t.mod_pi_image, t.image_fibre):
        lines.extend(print_group(h).splitlines())
        lines.append("")
    report = Report(f"triptych of {rho.name}")
    report.extend(t.report)
    ok = report.ok and t.diptych.stabilized
    data = {"saturated_fibre": _group_json(t.saturated_fibre),
            "mod_pi_image": _group_json(t.mod_pi_image),
            "image_fibre": _group_json(t.image_fibre),
            "stabilized": t.diptych.stabilized}
    return _finish(args, "triptych", ok, report, data, lines)


def cmd_dgal_solve(args) -> int:
    c = _load(args).lookup("connection", args.name)
    y = formal_solution(c, args.order)
    lines = ["fundamental solution modulo x^" + str(args.order + 1) + ":"]
    for row in y:
        lines.append("  [" + ", ".join(print_laurent(e) for e in row) + "]")
    data = {"order": args.order,
            "rows": [[print_laurent(e) for e in row] for row in y]}
    return _finish(args, "dgal-solve", True, None, data, lines)


def _entry_json(entry) -> dict:
    out = {"level": entry.level, "trivial": entry.trivial,
           "obstruction": list(entry.obstruction)}
    if entry.gauge is not None:
        out["gauge"] = [[print_laurent(e) for e in row] for row in entry.gauge]
    return out


def _entry_lines(entry):
    if entry.trivial:
        rows = ["[" + ", ".join(print_laurent(e) for e in row) + "]"
                for row in entry.gauge]
        return [f"level {entry.level}: trivial, gauge " + ", ".join(rows)]
    lines = [f"level {entry.level}: not trivial"]
    for label in entry.obstruction:
        lines.append(f"  inconsistent: {label}")
    return lines


def cmd_dgal_trivial(args) -> int:
    c = _load(args).lookup("connection", args.name)
    entry = triviality_mod(c, args.level, args.degree_bound)
    if entry.trivial and not check_gauge(c, entry):
        raise NeronError("gauge replay failed")
    lines = _entry_lines(entry)
    return _finish(args, "dgal-trivial", entry.trivial, None,
                   _entry_json(entry), lines)


def cmd_dgal_diagnose(args) -> int:
    c = _load(args).lookup("connection", args.name)
    rep, level_report, verdict = galois_diagnostic(c, args.levels,
                                                   args.degree_bound)
    lines = []
    for n in range(args.levels + 1):
        lines.extend(_entry_lines(rep.levels[n]))
    lines.append(f"verdict: {verdict}")
    data = {"levels": [_entry_json(rep.levels[n])
                       for n in range(args.levels + 1)],
            "trivial_through": rep.trivial_through(),
            "verdict": verdict}
    return _finish(args, "dgal-diagnose", True, level_report, data, lines)


def _common(p: argparse.ArgumentParser, name=True):
    p.add_argument("file", help="presentation file")
    if name:
        p.add_argument("name", nargs="?", default=None,
                       help="block name (optional when unambiguous)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-pairs", type=int, default=None,
                   help="basis computation pair budget")
    p.add_argument("--degree-bound", type=int, default=None,
                   help="degree budget (gauge window for dgal-* commands)")


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="neron",
        description="Flat group schemes over a discrete valuation ring, "
                    "presented as Hopf algebras.")
    sub = root.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, help=kwargs.pop("help", None))
        _common(p, name=kwargs.pop("named", True))
        p.set_defaults(func=fn)
        return p

    add("check-hopf", cmd_check_hopf, help="verify the Hopf algebra axioms")
    add("check-flat", cmd_check_flat, help="certify flatness over the base")
    add("check-morphism", cmd_check_morphism,
        help="verify a pullback is a Hopf algebra map")
    add("fibre", cmd_fibre, help="pruned special fibre of a group")

    p = add("reduce-mod", cmd_reduce_mod, help="base change to R/(pi^(n+1))")
    p.add_argument("--modulus", type=int, required=True,
                   help="reduce modulo pi^(modulus+1)")

    p = add("blowup", cmd_blowup, help="dilatation at a subgroup of the fibre")
    p.add_argument("--centre", required=True,
                   help="generators of the centre ideal, comma separated")

    p = add("partial-blowup", cmd_partial_blowup,
            help="dilatation at a flat subgroup reduced mod pi^(level+1)")
    p.add_argument("--ideal", required=True,
                   help="generators of the flat subgroup ideal")
    p.add_argument("--level", type=int, default=0)

    p = add("auto-trunc", cmd_auto_trunc,
            help="level-n truncation of the automatic blowup")
    p.add_argument("--level", type=int, default=1)

    p = add("auto-member", cmd_auto_member,
            help="membership of f/pi^m in the automatic blowup")
    p.add_argument("--element", required=True,
                   help="an element such as \"x/pi^2\"")

    p = add("standard-seq", cmd_standard_seq,
            help="standard sequence of blowups factoring a morphism")
    p.add_argument("--depth", type=int, default=3)

    p = add("strict-transform", cmd_strict_transform,
            help="flat transform of a subgroup through a blowup")
    p.add_argument("--centre", required=True)
    p.add_argument("--ideal", required=True)

    p = add("check-constancy", cmd_check_constancy,
            help="watch a subgroup's fibre along repeated blowups")
    p.add_argument("--ideal", required=True)
    p.add_argument("--depth", type=int, default=3)

    add("rep-validate", cmd_rep_validate, help="check the comodule axioms")
    add("rep-faithful", cmd_rep_faithful,
        help="decide whether matrix entries generate the coordinate ring")

    p = add("rep-blowup-identity", cmd_rep_blowup_identity,
            help="double a representation across a unit-section blowup")
    p.add_argument("--level", type=int, default=1)

    p = add("rep-blowup-line", cmd_rep_blowup_line,
            help="glue a representation across a line-stabilizer blowup")
    p.add_argument("--column", type=int, default=1)
    p.add_argument("--e-matrix", default=None,
                   help="covering matrix over the blown group, e.g. \"[[a22]]\"")
    p.add_argument("--e-witness", default=None,
                   help="inverse-determinant witness for the covering matrix")

    p = add("rep-rescale", cmd_rep_rescale,
            help="rescale a representation through a line-stabilizer blowup")
    p.add_argument("--column", type=int, default=1)

    p = sub.add_parser("rep-sum", help="direct sum of two representations")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-pairs", type=int, default=None)
    p.add_argument("--degree-bound", type=int, default=None)
    p.set_defaults(func=cmd_rep_sum)

    p = add("conormal", cmd_conormal,
            help="conjugation action on the conormal space of a fibre subgroup")
    p.add_argument("--ideal", required=True,
                   help="generators of the subgroup ideal in the fibre")

    add("image", cmd_image, help="flat schematic image of a morphism")

    p = add("diptych", cmd_diptych,
            help="image and its saturation tower")
    p.add_argument("--steps", type=int, default=8)

    p = add("triptych", cmd_triptych,
            help="special fibres of the image, its saturation, and the mod-pi image")
    p.add_argument("--steps", type=int, default=8)

    p = add("dgal-solve", cmd_dgal_solve,
            help="truncated fundamental solution at the origin")
    p.add_argument("--order", type=int, default=3)

    p = add("dgal-trivial", cmd_dgal_trivial,
            help="search for a trivializing gauge modulo pi^(level+1)")
    p.add_argument("--level", type=int, default=0)

    p = add("dgal-diagnose", cmd_dgal_diagnose,
            help="triviality levels and the blowup depth they evidence")
    p.add_argument("--levels", type=int, default=3)

    return root


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UndefinedName) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except NeronError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
