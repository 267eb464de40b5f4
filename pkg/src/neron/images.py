"""Schematic images of group morphisms and their saturation towers.

A morphism rho factors through the flat closed subgroup its pullback cuts
out of the target (the kernel of the pullback, saturated at pi).  Adjoining
the pi-divisible part of the coordinate ring step by step approximates the
pi-saturation of the image ring; the chain of special fibres of these data
is the mod-pi picture of the factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blowup import neron_blowup
from .config import DEFAULT_LIMITS, Limits
from .errors import DivisionObstruction, LiftFailure
from .groebner import Ideal, certified_pi_division, contract, saturate_pi
from .hopf import (GroupMorphism, HopfPresentation, check_flat, prune,
                   special_fibre)
from .report import Report
from .ring import Substitution, format_poly


@dataclass
class ImageResult:
    group: HopfPresentation
    embed: GroupMorphism
    cover: GroupMorphism


@dataclass
class Diptych:
    image: ImageResult
    stages: list
    projections: list
    lifts: list
    stabilized: bool
    report: Report


@dataclass
class Triptych:
    diptych: Diptych
    saturated_fibre: HopfPresentation
    mod_pi_image: HopfPresentation
    image_fibre: HopfPresentation
    report: Report


def image_hopf(rho: GroupMorphism, limits: Limits = DEFAULT_LIMITS) -> ImageResult:
    """The flat closed subgroup of the target that rho lands in.

    Relations are the contraction of the source relations along the
    pullback, saturated at pi so the result is flat: the closure of the
    generic-fibre image.
    """
    tgt = rho.target
    kernel = contract(rho.pullback, rho.source.relations, limits)
    kernel = saturate_pi(kernel, limits)
    rels = Ideal(tgt.ring, list(kernel.basis(limits)))
    group = HopfPresentation(f"Im({rho.name})", tgt.ring, rels,
                             tgt.comul, tgt.counit, tgt.antipode)
    check_flat(group, limits)
    embed = GroupMorphism(f"{group.name}->{tgt.name}", group, tgt,
                          Substitution.identity(tgt.ring))
    cover = GroupMorphism(f"{rho.source.name}->{group.name}", rho.source, group,
                          rho.pullback)
    return ImageResult(group, embed, cover)


def _pruned_fibre(h: HopfPresentation, name: str, limits: Limits):
    """Special fibre with forced variables eliminated; returns the fibre
    and the pullback of the original coordinates into it."""
    fib = special_fibre(h).rename(name)
    small, eliminated = prune(fib, limits=limits)
    images = {v: eliminated[v] if v in eliminated else small.ring.var(v)
              for v in h.ring.variables}
    return small, Substitution(h.ring, small.ring, images)


def saturated_image(rho: GroupMorphism, steps: int,
                    limits: Limits = DEFAULT_LIMITS) -> Diptych:
    """Grow the image by repeatedly adjoining its pi-divisible part.

    Each stage blows up the previous one at the contraction of the
    source's special-fibre ideal; the tower stabilizes when that
    contraction is the stage's own special fibre, meaning no coordinate
    of the source ring is a new pi-fold of a stage element.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    img = image_hopf(rho, limits)
    src = rho.source
    rep = Report(f"image tower for {rho.name}")
    stages = [img.group]
    projections = []
    lifts = [img.cover]
    pull = img.cover.pullback
    stabilized = False
    fibre_ideal = Ideal(src.ring, list(src.relations.generators) + [src.ring.pi()])
    for i in range(steps):
        current = stages[-1]
        centre = contract(pull, fibre_ideal, limits)
        whole = Ideal(current.ring,
                      [current.ring.pi()] + list(current.relations.generators))
        if centre.same_ideal(whole, limits):
            stabilized = True
            rep.add("tower stabilized", f"stage {i}", True,
                    "centre is the whole special fibre")
            break
        b = neron_blowup(current, centre, f"{img.group.name}[{i + 1}]", limits)
        images = {}
        for v in b.blown.ring.variables:
            if v in b.xi_map:
                try:
                    images[v] = certified_pi_division(pull(b.xi_map[v]), 1,
                                                      src.relations, limits)
                except DivisionObstruction as e:
                    raise LiftFailure(f"stage {i + 1} lift fails at {v!r}",
                                      witness=e.witness) from e
            else:
                images[v] = pull.images[v]
        pull = Substitution(b.blown.ring, src.ring, images)
        rep.add("stage adjoined pi-divisible coordinates", b.blown.name, True,
                ", ".join(b.adjoined))
        stages.append(b.blown)
        projections.append(b.projection)
        lifts.append(GroupMorphism(f"{src.name}->{b.blown.name}", src,
                                   b.blown, pull))
    else:
        centre = contract(pull, fibre_ideal, limits)
        whole = Ideal(stages[-1].ring,
                      [stages[-1].ring.pi()] + list(stages[-1].relations.generators))
        stabilized = centre.same_ideal(whole, limits)
        rep.add("tower stabilized", f"stage {steps}", stabilized,
                "" if stabilized else "the centre still exceeds the special fibre")
    for i, lift in enumerate(lifts):
        composed = lift.pullback
        for proj in reversed(projections[:i]):
            composed = proj.pullback.then(composed)
        ok = True
        for v in img.group.ring.variables:
            g = img.group.ring.var(v)
            d = src.relations.normal_form(composed(g) - rho.pullback(g), limits)
            ok = ok and d.is_zero()
        rep.add("stage factors the morphism", stages[i].name, ok)
    return Diptych(img, stages, projections, lifts, stabilized, rep)


def triptych(rho: GroupMorphism, steps: int = 8,
             limits: Limits = DEFAULT_LIMITS) -> Triptych:
    """The three special-fibre groups of a morphism.

    The saturation tower's fibre maps onto the mod-pi image of the
    morphism, which sits as a closed subgroup inside the fibre of the
    schematic image; the middle term is certified to equal the image of
    the outer map.
    """
    dip = saturated_image(rho, steps, limits)
    img = dip.image
    rep = Report(f"special fibres for {rho.name}")
    rep.extend(dip.report)

    image_fibre, _ = _pruned_fibre(img.group, f"{img.group.name}_k", limits)

    last = dip.stages[-1]
    pull = Substitution.identity(img.group.ring)
    for proj in dip.projections:
        pull = pull.then(proj.pullback)
    saturated_fibre, to_fibre = _pruned_fibre(last, f"{last.name}_k", limits)

    src = rho.source
    fibre_ideal = Ideal(src.ring, list(src.relations.generators) + [src.ring.pi()])
    mod_pi_rels = contract(rho.pullback, fibre_ideal, limits)
    mod_pi_image = HopfPresentation(
        f"Im({rho.name}_k)", img.group.ring,
        Ideal(img.group.ring, list(mod_pi_rels.basis(limits))),
        img.group.comul, img.group.counit, img.group.antipode)

    stage_fibre_ideal = Ideal(saturated_fibre.ring,
                              list(saturated_fibre.relations.generators)
                              + [saturated_fibre.ring.pi()])
    outer = contract(pull.then(to_fibre), stage_fibre_ideal, limits)
    same = outer.same_ideal(mod_pi_rels, limits)
    bad = ""
    if not same:
        bad = next((format_poly(g) for g in outer.basis(limits)
                    if not mod_pi_rels.contains(g, limits)),
                   next(format_poly(g) for g in mod_pi_rels.basis(limits)
                        if not outer.contains(g, limits)))
    rep.add("middle fibre is the image of the saturated fibre",
            mod_pi_image.name, same, bad)
    return Triptych(dip, saturated_fibre, mod_pi_image, image_fibre, rep)


def fibre_kernel(t: Triptych, limits: Limits = DEFAULT_LIMITS) -> HopfPresentation:
    """Kernel of the saturated fibre mapping onto the mod-pi image:
    the fibre product with the unit section of the middle group."""
    sat = t.saturated_fibre
    dip = t.diptych
    pull = Substitution.identity(dip.image.group.ring)
    for proj in dip.projections:
        pull = pull.then(proj.pullback)
    _, to_fibre = _pruned_fibre(dip.stages[-1], f"{dip.stages[-1].name}_k", limits)
    into = pull.then(to_fibre)
    mid = t.mod_pi_image
    gens = (list(sat.relations.generators) + [sat.ring.pi()]
            + [into(g) for g in mid.aug_gens()])
    return HopfPresentation(f"Ker({sat.name}->{mid.name})", sat.ring,
                            Ideal(sat.ring, gens), sat.comul, sat.counit,
                            sat.antipode)


def check_unipotent_kernel(t: Triptych, bound: int = 6,
                           limits: Limits = DEFAULT_LIMITS) -> Report:
    """Certify that the kernel of the fibre surjection is unipotent.

    Sufficient certificates, tried in order: a filtration of the kernel's
    coordinates by primitives (each variable comultiplies additively
    modulo the ones already certified), or nilpotence of the augmentation
    ideal at the bound.  Reports one line per certificate step and a
    final verdict line; an undecided result is not a refutation.
    """
    ker = fibre_kernel(t, limits)
    rep = Report(f"unipotence certificate for {ker.name}")
    ring = ker.ring
    ring2 = ker.doubled_ring()
    rels2 = ker.doubled_ideal()
    aug = ker.aug_gens()
    todo = [v for i, v in enumerate(ring.variables)
            if not ker.relations.contains(aug[i], limits)]
    shifted = dict(zip(ring.variables, aug))
    if not todo:
        rep.add("kernel is the trivial group", ker.name, True)
        rep.add("unipotence", ker.name, True, "certified")
        return rep
    certified = []
    progress = True
    while todo and progress:
        progress = False
        for v in list(todo):
            lower = [shifted[w].in_ring(ring2, {u: u + s for u in ring.variables})
                     for w in certified for s in ("'", "''")]
            mod = rels2.plus(Ideal(ring2, lower)) if lower else rels2
            g = shifted[v]
            d = mod.normal_form(
                ker.comul(g)
                - g.in_ring(ring2, {u: u + "'" for u in ring.variables})
                - g.in_ring(ring2, {u: u + "''" for u in ring.variables}),
                limits)
            if d.is_zero():
                rep.add("coordinate is primitive modulo the previous ones", v, True)
                certified.append(v)
                todo.remove(v)
                progress = True
    if not todo:
        rep.add("unipotence", ker.name, True,
                "certified: additive filtration " + " < ".join(certified))
        return rep
    live = [g for g in (ker.relations.normal_form(a, limits) for a in aug)
            if not g.is_zero()]
    power = live
    for m in range(2, bound + 1):
        power = [ker.relations.normal_form(a * g, limits)
                 for a in power for g in live]
        power = [g for g in power if not g.is_zero()]
        if not power:
            rep.add("augmentation ideal is nilpotent", f"exponent {m}", True)
            rep.add("unipotence", ker.name, True, "certified: nilpotent augmentation")
            return rep
    rep.add("unipotence", ker.name, False,
            "not decided at bound; unresolved: " + ", ".join(sorted(todo)))
    return rep
