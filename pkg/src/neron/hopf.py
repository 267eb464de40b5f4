"""Finitely presented Hopf algebras over R = Q[pi]_(pi) and their checks.

A presentation fixes a polynomial ring over R, a relation ideal, and the
three structure maps as substitutions: comultiplication lands in a doubled
ring (one primed and one double-primed copy of each variable), the counit
lands in the scalar ring, the antipode is an endomorphism of the ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import DEFAULT_LIMITS, Limits
from .errors import UnknownVariable
from .groebner import Ideal, contract, saturate_pi, subalgebra_member
from .report import Report
from .ring import Poly, PolyRing, Scalar, Substitution, format_poly, format_scalar

SCALARS = PolyRing(())

PRIME1 = "'"
PRIME2 = "''"
PRIME3 = "'''"


def tensor_ring(ring: PolyRing, suffixes) -> PolyRing:
    names = []
    for s in suffixes:
        names.extend(v + s for v in ring.variables)
    return PolyRing(tuple(names), ring.order)


def copy_into(f: Poly, ring_t: PolyRing, suffix: str) -> Poly:
    return f.in_ring(ring_t, {v: v + suffix for v in f.ring.variables})


def tensor_ideal(relations: Ideal, ring_t: PolyRing, suffixes) -> Ideal:
    """Relations of a tensor power, one renamed copy per factor.

    When no leading term involves pi, the copies' leading terms live on
    disjoint variable blocks, every cross pair is coprime, and the union
    of the reduced bases is already the reduced basis.  A leading term
    with a pi factor breaks the disjointness (pi is shared between the
    copies), so the basis is recomputed from scratch in that case.
    """
    gens = []
    basis = []
    shared_pi = False
    for s in suffixes:
        rename = {v: v + s for v in relations.ring.variables}
        gens.extend(g.in_ring(ring_t, rename) for g in relations.generators)
        for g in relations.basis():
            if g.lead_monomial()[-1] != 0:
                shared_pi = True
            basis.append(g.in_ring(ring_t, rename))
    if shared_pi:
        return Ideal(ring_t, gens)
    basis.sort(key=lambda g: ring_t.order.key(g.lead_monomial()))
    return Ideal.with_basis(ring_t, gens, basis)


@dataclass
class HopfPresentation:
    name: str
    ring: PolyRing
    relations: Ideal
    comul: Substitution
    counit: Substitution
    antipode: Substitution
    flat_certified: bool = False
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.comul.source != self.ring:
            raise UnknownVariable("comultiplication source ring mismatch")
        for v in self.ring.variables:
            if v not in self.comul.images or v not in self.counit.images or v not in self.antipode.images:
                raise UnknownVariable(f"structure maps missing image of '{v}'")

    def doubled_ring(self) -> PolyRing:
        if "ring2" not in self._memo:
            self._memo["ring2"] = tensor_ring(self.ring, (PRIME1, PRIME2))
        return self._memo["ring2"]

    def doubled_ideal(self) -> Ideal:
        if "ideal2" not in self._memo:
            self._memo["ideal2"] = tensor_ideal(self.relations, self.doubled_ring(), (PRIME1, PRIME2))
        return self._memo["ideal2"]

    def tripled_ring(self) -> PolyRing:
        if "ring3" not in self._memo:
            self._memo["ring3"] = tensor_ring(self.ring, (PRIME1, PRIME2, PRIME3))
        return self._memo["ring3"]

    def tripled_ideal(self) -> Ideal:
        if "ideal3" not in self._memo:
            self._memo["ideal3"] = tensor_ideal(self.relations, self.tripled_ring(), (PRIME1, PRIME2, PRIME3))
        return self._memo["ideal3"]

    def eps(self, v: str) -> Scalar:
        return self.counit.images[v].as_scalar()

    def eps_of(self, f: Poly) -> Scalar:
        return self.counit(f).as_scalar()

    def aug_gens(self):
        """Generators of the augmentation ideal: v - eps(v)."""
        out = []
        for v in self.ring.variables:
            out.append(self.ring.var(v) - self.ring.scalar(self.eps(v)))
        return out

    def rename(self, name: str) -> "HopfPresentation":
        return HopfPresentation(name, self.ring, self.relations, self.comul,
                                self.counit, self.antipode, self.flat_certified)


@dataclass
class GroupMorphism:
    """Morphism of group schemes, recorded by its pullback on coordinates."""
    name: str
    source: HopfPresentation
    target: HopfPresentation
    pullback: Substitution

    def __post_init__(self):
        for v in self.target.ring.variables:
            if v not in self.pullback.images:
                raise UnknownVariable(f"pullback missing image of '{v}'")


def augmentation_ideal(h: HopfPresentation) -> Ideal:
    return Ideal(h.ring, list(h.relations.generators) + h.aug_gens())


def _counit_legs(h: HopfPresentation):
    """Substitutions (eps x id) and (id x eps) from the doubled ring back."""
    ring2 = h.doubled_ring()
    left = {}
    right = {}
    for v in h.ring.variables:
        ev = h.ring.scalar(h.eps(v))
        left[v + PRIME1] = ev
        left[v + PRIME2] = h.ring.var(v)
        right[v + PRIME1] = h.ring.var(v)
        right[v + PRIME2] = ev
    return Substitution(ring2, h.ring, left), Substitution(ring2, h.ring, right)


def _coassoc_legs(h: HopfPresentation):
    """(comul x id) and (id x comul) from the doubled into the tripled ring."""
    ring2 = h.doubled_ring()
    ring3 = h.tripled_ring()
    first = {}
    second = {}
    for v in h.ring.variables:
        dv = h.comul.images[v]
        first[v + PRIME1] = dv.in_ring(ring3)
        first[v + PRIME2] = ring3.var(v + PRIME3)
        second[v + PRIME1] = ring3.var(v + PRIME1)
        second[v + PRIME2] = dv.in_ring(ring3, {w + PRIME1: w + PRIME2 for w in h.ring.variables}
                                        | {w + PRIME2: w + PRIME3 for w in h.ring.variables})
    return Substitution(ring2, ring3, first), Substitution(ring2, ring3, second)


def _antipode_legs(h: HopfPresentation):
    """m(S x id) and m(id x S) from the doubled ring to the base ring."""
    ring2 = h.doubled_ring()
    left = {}
    right = {}
    for v in h.ring.variables:
        sv = h.antipode.images[v]
        left[v + PRIME1] = sv
        left[v + PRIME2] = h.ring.var(v)
        right[v + PRIME1] = h.ring.var(v)
        right[v + PRIME2] = sv
    return Substitution(ring2, h.ring, left), Substitution(ring2, h.ring, right)


def comul_squared(h: HopfPresentation, f: Poly) -> Poly:
    """Apply comultiplication twice, landing in the tripled ring."""
    first, _ = _coassoc_legs(h)
    return first(h.comul(f))


def check_flat(h: HopfPresentation, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Certify pi-torsion freeness: the relation ideal equals its pi-saturation."""
    rep = Report(f"flatness of {h.name}")
    sat = saturate_pi(h.relations, limits)
    same = sat.same_ideal(h.relations, limits)
    witness = ""
    if not same:
        extra = [g for g in sat.basis() if not h.relations.contains(g, limits)]
        if extra:
            witness = format_poly(extra[0]) + " has a pi multiple in the ideal"
    rep.add("pi-saturated", h.name, same, witness)
    if same:
        h.flat_certified = True
    return rep


def check_hopf(h: HopfPresentation, limits: Limits = DEFAULT_LIMITS,
               include_flat: bool = True) -> Report:
    """Verify the Hopf axioms for a presentation, relation by relation.

    Every identity is tested as membership in the relation ideal of the
    appropriate tensor power, so the checks are exact over R.
    """
    rep = Report(f"Hopf axioms for {h.name}")
    rels2 = h.doubled_ideal()
    rels3 = h.tripled_ideal()
    ring2 = h.doubled_ring()

    for i, r in enumerate(h.relations.generators):
        subject = f"relation {i + 1}"
        dr = rels2.normal_form(h.comul(r), limits)
        rep.add("comultiplication respects relations", subject, dr.is_zero(),
                format_poly(dr) if not dr.is_zero() else "")
        er = h.eps_of(r)
        rep.add("counit kills relations", subject, er.is_zero(),
                format_scalar(er) if not er.is_zero() else "")
        sr = h.relations.normal_form(h.antipode(r), limits)
        rep.add("antipode respects relations", subject, sr.is_zero(),
                format_poly(sr) if not sr.is_zero() else "")

    left_eps, right_eps = _counit_legs(h)
    first, second = _coassoc_legs(h)
    s_left, s_right = _antipode_legs(h)
    for v in h.ring.variables:
        dv = h.comul.images[v]
        lv = h.relations.normal_form(left_eps(dv) - h.ring.var(v), limits)
        rep.add("counit is left neutral", v, lv.is_zero(), format_poly(lv) if not lv.is_zero() else "")
        rv = h.relations.normal_form(right_eps(dv) - h.ring.var(v), limits)
        rep.add("counit is right neutral", v, rv.is_zero(), format_poly(rv) if not rv.is_zero() else "")
        cv = rels3.normal_form(first(dv) - second(dv), limits)
        rep.add("comultiplication is coassociative", v, cv.is_zero(),
                format_poly(cv) if not cv.is_zero() else "")
        target = h.ring.scalar(h.eps(v))
        av = h.relations.normal_form(s_left(dv) - target, limits)
        rep.add("antipode is a left inverse", v, av.is_zero(), format_poly(av) if not av.is_zero() else "")
        bv = h.relations.normal_form(s_right(dv) - target, limits)
        rep.add("antipode is a right inverse", v, bv.is_zero(), format_poly(bv) if not bv.is_zero() else "")

    if include_flat:
        rep.extend(check_flat(h, limits))
    return rep


def check_morphism(m: GroupMorphism, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Verify that a pullback defines a morphism of group schemes."""
    rep = Report(f"morphism {m.name}: {m.source.name} -> {m.target.name}")
    src, tgt = m.source, m.target
    for i, r in enumerate(tgt.relations.generators):
        img = src.relations.normal_form(m.pullback(r), limits)
        rep.add("pullback respects relations", f"relation {i + 1}", img.is_zero(),
                format_poly(img) if not img.is_zero() else "")
    ring2s = src.doubled_ring()
    rels2s = src.doubled_ideal()
    pull2 = Substitution(
        tgt.doubled_ring(), ring2s,
        {v + s: copy_into(m.pullback.images[v], ring2s, s)
         for v in tgt.ring.variables for s in (PRIME1, PRIME2)})
    for v in tgt.ring.variables:
        lhs = src.comul(m.pullback.images[v])
        rhs = pull2(tgt.comul.images[v])
        d = rels2s.normal_form(lhs - rhs, limits)
        rep.add("pullback intertwines comultiplication", v, d.is_zero(),
                format_poly(d) if not d.is_zero() else "")
        e = src.eps_of(m.pullback.images[v]) - tgt.eps(v)
        rep.add("pullback intertwines counit", v, e.is_zero(),
                format_scalar(e) if not e.is_zero() else "")
        s = src.relations.normal_form(
            src.antipode(m.pullback.images[v]) - m.pullback(tgt.antipode.images[v]), limits)
        rep.add("pullback intertwines antipode", v, s.is_zero(),
                format_poly(s) if not s.is_zero() else "")
    return rep


def special_fibre(h: HopfPresentation) -> HopfPresentation:
    """The fibre over the residue field: set pi to zero everywhere."""
    ring = h.ring
    rels = Ideal(ring, [g.set_pi_zero() for g in h.relations.generators])
    comul = Substitution(ring, h.doubled_ring(),
                         {v: h.comul.images[v].set_pi_zero() for v in ring.variables})
    counit = Substitution(ring, SCALARS,
                          {v: SCALARS.scalar(Scalar.from_rational(h.eps(v).set_pi_zero()))
                           for v in ring.variables})
    antipode = Substitution(ring, ring,
                            {v: h.antipode.images[v].set_pi_zero() for v in ring.variables})
    return HopfPresentation(h.name + "_k", ring, rels, comul, counit, antipode, True)


def generic_fibre(h: HopfPresentation) -> HopfPresentation:
    """The fibre over the fraction field: saturate the relations at pi."""
    rels = saturate_pi(h.relations)
    return HopfPresentation(h.name + "_K", h.ring, rels, h.comul, h.counit, h.antipode, True)


@dataclass
class ReduceResult:
    presentation: HopfPresentation
    level: int
    trivial: bool
    report: Report


def reduce_mod(h: HopfPresentation, n: int, limits: Limits = DEFAULT_LIMITS) -> ReduceResult:
    """Base change to R/(pi^(n+1)); reports whether the quotient group is trivial."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    ring = h.ring
    cut = ring.pi() ** (n + 1)
    rels = Ideal(ring, list(h.relations.generators) + [cut])
    out = HopfPresentation(f"{h.name}_mod{n}", ring, rels, h.comul, h.counit, h.antipode, False)
    rep = Report(f"{h.name} mod pi^{n + 1} trivial")
    for v in ring.variables:
        d = rels.normal_form(ring.var(v) - ring.scalar(h.eps(v)), limits)
        rep.add("coordinate is constant", v, d.is_zero(), format_poly(d) if not d.is_zero() else "")
    return ReduceResult(out, n, rep.ok, rep)


def reduce_mod_image(m: GroupMorphism, n: int, limits: Limits = DEFAULT_LIMITS) -> ReduceResult:
    """Base change the image of a morphism to R/(pi^(n+1)).

    The image of the source in the target is trivial at level n exactly
    when every target coordinate pulls back to its counit value modulo
    the source relations and pi^(n+1).
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    src, tgt = m.source, m.target
    ring = src.ring
    cut = ring.pi() ** (n + 1)
    rels = Ideal(ring, list(src.relations.generators) + [cut])
    rep = Report(f"image of {src.name} in {tgt.name} mod pi^{n + 1} trivial")
    for v in tgt.ring.variables:
        d = rels.normal_form(m.pullback.images[v] - ring.scalar(tgt.eps(v)), limits)
        rep.add("coordinate pulls back to a constant", v, d.is_zero(),
                format_poly(d) if not d.is_zero() else "")
    out = HopfPresentation(f"{src.name}_mod{n}", ring, rels,
                           src.comul, src.counit, src.antipode, False)
    return ReduceResult(out, n, rep.ok, rep)


def hopf_ideal_report(h: HopfPresentation, gens, pi_power: int = 0,
                      limits: Limits = DEFAULT_LIMITS) -> Report:
    """Check that an ideal is a Hopf ideal contained in the augmentation ideal.

    With pi_power = k > 0 the conditions are tested modulo pi^k; with k = 1
    this is the precondition for a single blowup step, and with k = 0 the
    conditions hold over the base, as flat closed subgroups require.
    """
    where = f" mod pi^{pi_power}" if pi_power else ""
    rep = Report(f"Hopf ideal conditions{where} in {h.name}")
    ring = h.ring
    ring2 = h.doubled_ring()
    side = []
    for g in gens:
        side.append(copy_into(g, ring2, PRIME1))
        side.append(copy_into(g, ring2, PRIME2))
    if pi_power:
        side.append(ring2.pi(pi_power))
    rels2 = h.doubled_ideal().plus(side)
    inside = Ideal(ring, list(h.relations.generators) + list(gens)
                   + ([ring.pi(pi_power)] if pi_power else []))
    for i, g in enumerate(gens):
        subject = f"generator {i + 1}"
        e = h.eps_of(g)
        ok_e = e.pi_valuation() >= pi_power if pi_power else e.is_zero()
        rep.add("counit vanishes", subject, ok_e, "" if ok_e else format_scalar(e))
        d = rels2.normal_form(h.comul(g), limits)
        rep.add("comultiplication stays in the two-sided span", subject, d.is_zero(),
                format_poly(d) if not d.is_zero() else "")
        s = inside.normal_form(h.antipode(g), limits)
        rep.add("antipode preserves the ideal", subject, s.is_zero(),
                format_poly(s) if not s.is_zero() else "")
    return rep


def quotient_presentation(h: HopfPresentation, gens, name: str) -> HopfPresentation:
    """Quotient by a Hopf ideal: same maps, enlarged relations."""
    rels = Ideal(h.ring, list(h.relations.generators) + list(gens))
    return HopfPresentation(name, h.ring, rels, h.comul, h.counit, h.antipode, False)


def prune(h: HopfPresentation, protected=(), limits: Limits = DEFAULT_LIMITS):
    """Eliminate variables that the relations express in the others.

    A variable w can go when the reduced lex basis contains w - g with g
    not involving w.  Returns the smaller presentation and, for each
    eliminated variable, its expression in the survivors.
    """
    if h.ring.order.kind != "lex":
        raise ValueError("pruning requires the lex order")
    current = h
    eliminated: dict[str, Poly] = {}
    while True:
        ring = current.ring
        basis = current.relations.basis(limits)
        found = None
        for g in basis:
            m = g.lead_monomial()
            if sum(m[:-1]) != 1 or m[-1] != 0:
                continue
            idx = next(i for i, e in enumerate(m[:-1]) if e)
            w = ring.variables[idx]
            if w in protected:
                continue
            if w in g.tail().variables_used():
                continue
            found = (w, -g.tail())
            break
        if found is None:
            break
        w, expr = found
        new_ring = ring.drop((w,))
        images = {v: new_ring.var(v) for v in ring.variables if v != w}
        images[w] = expr.in_ring(new_ring)
        sub = Substitution(ring, new_ring, images)

        moved = [sub(g) for g in basis]
        rels = Ideal(new_ring, [g for g in moved if not g.is_zero()])
        new_h = HopfPresentation(
            current.name, new_ring, rels,
            _pruned_comul(current, sub, new_ring),
            Substitution(new_ring, SCALARS,
                         {v: current.counit.images[v] for v in new_ring.variables}),
            Substitution(new_ring, new_ring,
                         {v: sub(current.antipode.images[v]) for v in new_ring.variables}),
            current.flat_certified)
        eliminated = {k: sub(e) for k, e in eliminated.items()}
        eliminated[w] = images[w]
        current = new_h
    return current, eliminated


def _pruned_comul(h: HopfPresentation, sub: Substitution, new_ring: PolyRing) -> Substitution:
    ring2_new = tensor_ring(new_ring, (PRIME1, PRIME2))
    images2 = {}
    for v in h.ring.variables:
        img = sub.images[v]
        for s in (PRIME1, PRIME2):
            images2[v + s] = copy_into(img, ring2_new, s)
    push = Substitution(h.doubled_ring(), ring2_new, images2)
    return Substitution(new_ring, ring2_new,
                        {v: push(h.comul.images[v]) for v in new_ring.variables})


def isomorphism_report(m: GroupMorphism, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Certify that a morphism is an isomorphism of group schemes.

    The pullback must be a bijective ring map: injectivity is contraction
    of the source relations being exactly the target relations, and
    surjectivity is every source coordinate lying in the image subalgebra.
    """
    rep = check_morphism(m, limits)
    src, tgt = m.source, m.target
    pulled = contract(m.pullback, src.relations, limits)
    rep.add("pullback is injective", tgt.name,
            pulled.same_ideal(tgt.relations, limits))
    gens = [m.pullback.images[v] for v in tgt.ring.variables]
    for v in src.ring.variables:
        expr = subalgebra_member(src.ring.var(v), gens, src.relations, limits)
        rep.add("pullback is surjective", v, expr is not None)
    return rep
