"""Dilatations: blow up a closed subgroup of a fibre and divide by pi.

Each blowup adjoins one fresh variable per carried centre generator a,
imposes pi^k * xi = a, saturates at pi, and divides the structure maps
of the centre generators by pi^k with certified exactness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .config import DEFAULT_LIMITS, Limits
from .errors import DivisionObstruction, LiftFailure, NotASubgroup
from .groebner import Ideal, certified_pi_division, contract, saturate_pi, subalgebra_member
from .hopf import (PRIME1, PRIME2, SCALARS, GroupMorphism, HopfPresentation,
                   check_morphism, hopf_ideal_report, prune, tensor_ideal, tensor_ring)
from .report import Report
from .ring import Poly, PolyRing, Substitution, format_poly

_XI = re.compile(r"^xi(\d+)$")


def fresh_xi_names(ring: PolyRing, count: int):
    top = 0
    for v in ring.variables:
        m = _XI.match(v)
        if m:
            top = max(top, int(m.group(1)))
    return [f"xi{top + 1 + i}" for i in range(count)]


@dataclass
class BlowupResult:
    blown: HopfPresentation
    projection: GroupMorphism
    centre: Ideal
    adjoined: tuple
    xi_map: dict
    level: int
    eliminated: dict
    report: Report
    chain: tuple = ()


@dataclass
class Stage:
    group: HopfPresentation
    centre: Ideal
    projection: GroupMorphism


@dataclass
class StandardSequence:
    stages: list
    depth: int
    lifted: GroupMorphism


def _coerce_ideal(h: HopfPresentation, gens) -> list:
    out = []
    for g in gens:
        if isinstance(g, Poly):
            out.append(g.in_ring(h.ring))
        else:
            out.append(h.ring.scalar(g))
    return out


def _blow(h: HopfPresentation, centre: Ideal, carried, power: int, name: str,
          limits: Limits, do_prune: bool) -> BlowupResult:
    names = fresh_xi_names(h.ring, len(carried))
    ring_b = h.ring.extend(tuple(names))
    gens_b = [g.in_ring(ring_b) for g in h.relations.generators]
    for nm, a in zip(names, carried):
        gens_b.append(ring_b.var(nm).mul_pi(power) - a.in_ring(ring_b))
    rels_b = saturate_pi(Ideal(ring_b, gens_b), limits)

    ring2_b = tensor_ring(ring_b, (PRIME1, PRIME2))
    rels2_b = tensor_ideal(rels_b, ring2_b, (PRIME1, PRIME2))

    comul_images = {v: h.comul.images[v].in_ring(ring2_b) for v in h.ring.variables}
    counit_images = {v: h.counit.images[v] for v in h.ring.variables}
    anti_images = {v: h.antipode.images[v].in_ring(ring_b) for v in h.ring.variables}
    for nm, a in zip(names, carried):
        comul_images[nm] = certified_pi_division(
            h.comul(a).in_ring(ring2_b), power, rels2_b, limits)
        counit_images[nm] = SCALARS.scalar(h.eps_of(a).divide_pi(power))
        anti_images[nm] = certified_pi_division(
            h.antipode(a).in_ring(ring_b), power, rels_b, limits)

    blown = HopfPresentation(
        name, ring_b, rels_b,
        Substitution(ring_b, ring2_b, comul_images),
        Substitution(ring_b, SCALARS, counit_images),
        Substitution(ring_b, ring_b, anti_images), True)

    eliminated: dict = {}
    if do_prune:
        blown, eliminated = prune(blown, limits=limits)

    proj_images = {v: eliminated[v] if v in eliminated else blown.ring.var(v)
                   for v in h.ring.variables}
    projection = GroupMorphism(f"{name}->{h.name}", blown, h,
                               Substitution(h.ring, blown.ring, proj_images))
    pull = projection.pullback

    post = Report(f"blowup invariants for {name}")
    xi_map = {}
    for nm, a in zip(names, carried):
        xi_map[nm] = a
        if nm in blown.ring.variables:
            xi_here = blown.ring.var(nm)
        else:
            xi_here = eliminated[nm]
        diff = xi_here.mul_pi(power) - pull(a)
        post.add("pi-power multiple of the fresh variable is the centre generator",
                 nm, blown.relations.contains(diff, limits), format_poly(diff))
    adjoined = tuple(nm for nm in names if nm in blown.ring.variables)
    return BlowupResult(blown, projection, centre, adjoined, xi_map, power,
                        eliminated, post)


def neron_blowup(h: HopfPresentation, centre: Ideal, name: str = None,
                 limits: Limits = DEFAULT_LIMITS, prune_result: bool = True) -> BlowupResult:
    """Blow up a closed subgroup of the special fibre and divide by pi.

    The centre is an ideal of the presentation ring that contains pi; it
    must cut out a subgroup of the special fibre, which is checked.
    """
    gens = _coerce_ideal(h, centre.generators)
    centre = Ideal(h.ring, gens)
    if not centre.contains(h.ring.pi(), limits):
        raise NotASubgroup("the centre of a blowup must contain pi")
    pre = hopf_ideal_report(h, gens, pi_power=1, limits=limits)
    if not pre.ok:
        raise NotASubgroup("centre is not a subgroup of the special fibre: "
                           + "; ".join(c.line() for c in pre.failures()))
    carried = [g for g in gens
               if not g.is_scalar() and not h.relations.contains(g, limits)]
    if name is None:
        name = h.name + "'"
    return _blow(h, centre, carried, 1, name, limits, prune_result)


def partial_blowup(h: HopfPresentation, subgroup: Ideal, n: int, name: str = None,
                   limits: Limits = DEFAULT_LIMITS, prune_result: bool = True) -> BlowupResult:
    """Blow up a flat closed subgroup at level n: divide its ideal by pi^(n+1).

    The subgroup ideal must be a Hopf ideal over the base with flat
    quotient; both are checked.  Level 0 agrees with a single blowup at
    the subgroup's special fibre.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    gens = _coerce_ideal(h, subgroup.generators)
    _flat_subgroup_checks(h, gens, limits)
    carried = [g for g in gens
               if not g.is_scalar() and not h.relations.contains(g, limits)]
    if name is None:
        name = f"{h.name}^[{n}]"
    centre = Ideal(h.ring, gens + [h.ring.pi(n + 1)])
    result = _blow(h, centre, carried, n + 1, name, limits, prune_result)
    cut = Ideal(result.blown.ring,
                list(result.blown.relations.generators) + [result.blown.ring.pi(n + 1)])
    for a in carried:
        pa = result.projection.pullback(a)
        result.report.add("reduction factors through the subgroup", format_poly(a),
                          cut.contains(pa, limits), format_poly(pa))
    return result


def _flat_subgroup_checks(h: HopfPresentation, gens, limits: Limits):
    pre = hopf_ideal_report(h, gens, pi_power=0, limits=limits)
    if not pre.ok:
        raise NotASubgroup("ideal is not a Hopf ideal over the base: "
                           + "; ".join(c.line() for c in pre.failures()))
    total = Ideal(h.ring, list(h.relations.generators) + list(gens))
    if not saturate_pi(total, limits).same_ideal(total, limits):
        raise NotASubgroup("quotient by the ideal is not flat")


def automatic_truncation(h: HopfPresentation, n: int, name: str = None,
                         limits: Limits = DEFAULT_LIMITS,
                         prune_result: bool = True) -> BlowupResult:
    """Adjoin pi^(-n) times the augmentation ideal, by n iterated blowups.

    At each step the centre is the unit section of the special fibre of
    the current stage.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    if name is None:
        name = f"{h.name}^({n})"
    first_centre = Ideal(h.ring, [h.ring.pi()] + h.aug_gens())
    if n == 0:
        ident = GroupMorphism(f"{h.name}->{h.name}", h, h, Substitution.identity(h.ring))
        return BlowupResult(h, ident, first_centre, (), {}, 0, {},
                            Report(f"blowup invariants for {h.name}"), ())
    current = h
    pull = Substitution.identity(h.ring)
    steps = []
    for i in range(n):
        centre = Ideal(current.ring, [current.ring.pi()] + current.aug_gens())
        step_name = name if i == n - 1 else f"{h.name}^({i + 1})"
        b = neron_blowup(current, centre, step_name, limits, prune_result)
        steps.append(b)
        pull = pull.then(b.projection.pullback)
        current = b.blown
    projection = GroupMorphism(f"{name}->{h.name}", current, h, pull)
    last = steps[-1]
    rep = Report(f"blowup invariants for {name}")
    for b in steps:
        rep.extend(b.report)
    return BlowupResult(current, projection, first_centre, last.adjoined,
                        last.xi_map, n, last.eliminated, rep, tuple(steps))


def automatic_member(h: HopfPresentation, numerator: Poly, power: int) -> bool:
    """Decide membership of numerator / pi^power in the automatic blowup.

    The criterion is that the counit of the fraction is integral: the pi
    valuation of eps(numerator) must be at least the power.
    """
    if power < 0:
        raise ValueError("power must be nonnegative")
    g = numerator.in_ring(h.ring) if numerator.ring != h.ring else numerator
    return h.eps_of(g).pi_valuation() >= power


def universal_lift(m: GroupMorphism, b: BlowupResult,
                   limits: Limits = DEFAULT_LIMITS) -> GroupMorphism:
    """Factor a morphism into the target through its blowup.

    Exists exactly when the morphism lands, modulo pi, inside the centre;
    the fresh coordinates pull back to certified divisions by pi.
    """
    steps = b.chain or (b,)
    cur = m
    for step in steps:
        src = cur.source
        images = {}
        for v in step.blown.ring.variables:
            if v in step.xi_map:
                value = cur.pullback(step.xi_map[v])
                try:
                    images[v] = certified_pi_division(value, step.level,
                                                      src.relations, limits)
                except DivisionObstruction as e:
                    raise LiftFailure(
                        f"morphism does not land in the centre at {v!r}",
                        witness=e.witness) from e
            else:
                images[v] = cur.pullback.images[v]
        cur = GroupMorphism(f"{m.name}^", src, step.blown,
                            Substitution(step.blown.ring, src.ring, images))
    return cur


def standard_sequence(rho: GroupMorphism, depth: int,
                      limits: Limits = DEFAULT_LIMITS) -> StandardSequence:
    """Iterate blowups of the target at the fibrewise image of a morphism.

    The morphism must be injective after inverting pi; each stage blows up
    the previous one at the contraction of (pi) along the lifted pullback,
    and the lift to the new stage is computed by certified division.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    src = rho.source
    src_sat = saturate_pi(src.relations, limits)
    tgt_sat = saturate_pi(rho.target.relations, limits)
    kernel = contract(rho.pullback, src_sat, limits)
    if not saturate_pi(kernel, limits).same_ideal(tgt_sat, limits):
        bad = next((g for g in kernel.basis(limits)
                    if not tgt_sat.contains(g, limits)), None)
        raise LiftFailure("pullback is not injective after inverting pi",
                          witness=format_poly(bad) if bad is not None else "")
    stages = []
    current = rho.target
    pull = rho.pullback
    for i in range(depth):
        fibre_ideal = Ideal(src.ring, list(src.relations.generators) + [src.ring.pi()])
        centre = contract(pull, fibre_ideal, limits)
        b = neron_blowup(current, centre, f"{rho.target.name}[{i + 1}]", limits)
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
        stages.append(Stage(b.blown, centre, b.projection))
        current = b.blown
    lifted = GroupMorphism(f"{rho.name}[{depth}]", src, current, pull)
    return StandardSequence(stages, depth, lifted)


def strict_transform(b: BlowupResult, subgroup: Ideal,
                     limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """Transform a flat closed subgroup of the original through a blowup.

    Extends the subgroup ideal along the projection and saturates at pi;
    the result is checked to be a Hopf ideal of the blown presentation.
    """
    base = b.projection.target
    gens = _coerce_ideal(base, subgroup.generators)
    _flat_subgroup_checks(base, gens, limits)
    pull = b.projection.pullback
    ext = [pull(g) for g in gens] + list(b.blown.relations.generators)
    out = saturate_pi(Ideal(b.blown.ring, ext), limits)
    post = hopf_ideal_report(b.blown, list(out.basis(limits)), pi_power=0, limits=limits)
    if not post.ok:
        raise NotASubgroup("strict transform is not a Hopf ideal: "
                           + "; ".join(c.line() for c in post.failures()))
    return out


def check_constancy(h: HopfPresentation, subgroup: Ideal, depth: int,
                    limits: Limits = DEFAULT_LIMITS) -> Report:
    """Blow up along a flat subgroup repeatedly and watch its fibre.

    Each stage blows up the subgroup's special fibre, transforms the
    subgroup, and certifies that the projection identifies the new centre
    fibre with the previous one.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    gens = _coerce_ideal(h, subgroup.generators)
    _flat_subgroup_checks(h, gens, limits)
    rep = Report(f"centre fibres along {depth} blowups of {h.name}")
    current = h
    cur_gens = gens
    for i in range(depth):
        stage = f"stage {i + 1}"
        centre = Ideal(current.ring, [current.ring.pi()] + cur_gens)
        b = neron_blowup(current, centre, limits=limits)
        transformed = strict_transform(b, Ideal(current.ring, cur_gens), limits)
        pull = b.projection.pullback
        before = Ideal(current.ring, list(current.relations.generators) + cur_gens
                       + [current.ring.pi()])
        after = transformed.plus([b.blown.ring.pi()])
        rep.add("centre fibre contracts to the previous one", stage,
                contract(pull, after, limits).same_ideal(before, limits))
        images = [pull(current.ring.var(v)) for v in current.ring.variables]
        onto = all(
            subalgebra_member(b.blown.ring.var(w), images, after, limits) is not None
            for w in b.blown.ring.variables)
        rep.add("centre fibre is covered by the previous one", stage, onto)
        current = b.blown
        cur_gens = [g for g in transformed.basis(limits)
                    if not b.blown.relations.contains(g, limits)]
        if not cur_gens:
            cur_gens = list(transformed.basis(limits))
    return rep
