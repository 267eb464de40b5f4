"""Dilatation machinery: single steps, towers, transforms, lifts."""

import pytest

from neron.blowup import (automatic_member, automatic_truncation, check_constancy,
                          fresh_xi_names, neron_blowup, partial_blowup,
                          standard_sequence, strict_transform, universal_lift)
from neron.config import Limits
from neron.errors import LiftFailure, NotASubgroup
from neron.groebner import Ideal
from neron.hopf import (GroupMorphism, check_flat, check_hopf, check_morphism,
                        isomorphism_report, special_fibre, prune)
from neron.library import (additive_group, multiplicative_group, product,
                           twisted_multiplicative)
from neron.ring import PolyRing, Substitution, format_poly

import suites

LIM = Limits()


def identity_centre(h) -> Ideal:
    return Ideal(h.ring, [h.ring.pi()] + list(h.aug_gens()))


class TestSingleStep:
    def test_multiplicative_at_unit_section(self):
        gm = multiplicative_group()
        u = gm.ring.var("u")
        b = neron_blowup(gm, Ideal(gm.ring, [gm.ring.pi(), u - 1]), limits=LIM)
        assert b.report.ok
        assert b.level == 1
        assert b.blown.name == "Gm'"
        assert b.blown.ring.variables == ("v", "xi1")
        assert [format_poly(g) for g in b.blown.relations.generators] == [
            "v*xi1*pi + v - 1"]
        assert format_poly(b.blown.comul.images["xi1"]) == (
            "xi1'*xi1''*pi + xi1' + xi1''")
        assert format_poly(b.blown.antipode.images["xi1"]) == "-v*xi1"
        assert format_poly(b.blown.antipode.images["v"]) == "xi1*pi + 1"
        assert b.adjoined == ("xi1",)
        assert format_poly(b.xi_map["xi1"]) == "u - 1"
        assert format_poly(b.eliminated["u"]) == "xi1*pi + 1"
        assert format_poly(b.projection.pullback.images["u"]) == "xi1*pi + 1"
        assert check_morphism(b.projection, LIM).ok

    def test_blown_group_is_twisted_form(self):
        gm = multiplicative_group()
        u = gm.ring.var("u")
        b = neron_blowup(gm, Ideal(gm.ring, [gm.ring.pi(), u - 1]), limits=LIM)
        t = twisted_multiplicative(1)
        ring = b.blown.ring
        xi, v = ring.var("xi1"), ring.var("v")
        iso = GroupMorphism("match", b.blown, t,
                            Substitution(t.ring, ring, {"x": xi, "y": -v * xi}))
        assert isomorphism_report(iso, LIM).ok

    def test_centre_must_be_a_subgroup(self):
        gm = multiplicative_group()
        u = gm.ring.var("u")
        with pytest.raises(NotASubgroup):
            neron_blowup(gm, Ideal(gm.ring, [gm.ring.pi(), u]), limits=LIM)
        with pytest.raises(NotASubgroup):
            neron_blowup(gm, Ideal(gm.ring, [gm.ring.pi(), u + 1]), limits=LIM)

    def test_special_fibre_becomes_additive(self):
        gm = multiplicative_group()
        b = neron_blowup(gm, identity_centre(gm), limits=LIM)
        fib, _ = prune(special_fibre(b.blown), limits=LIM)
        assert len(fib.ring.variables) == 1
        x = fib.ring.var(fib.ring.variables[0])
        assert fib.relations.is_zero(LIM)
        img = fib.comul.images[fib.ring.variables[0]]
        two = fib.doubled_ring()
        assert img == two.var(fib.ring.variables[0] + "'") + two.var(
            fib.ring.variables[0] + "''")

    def test_fresh_names_skip_taken(self):
        assert fresh_xi_names(PolyRing(("xi1", "a")), 2) == ["xi2", "xi3"]


class TestAutomaticTruncation:
    def test_matches_twisted_presentation(self):
        gm = multiplicative_group()
        for n in (1, 2, 3):
            tower = automatic_truncation(gm, n, limits=LIM)
            blown = tower.blown
            assert blown.name == f"Gm^({n})"
            lo, hi = f"xi{2 * n - 1}", f"xi{2 * n}"
            assert blown.ring.variables == (lo, hi)
            t = twisted_multiplicative(n)
            rename = {"x": lo, "y": hi}
            moved = t.relations.in_ring(blown.ring, rename)
            assert blown.relations.same_ideal(moved, LIM)
            two = blown.doubled_ring()
            expect = (two.var(lo + "'") * two.var(lo + "''") * two.pi(n)
                      + two.var(lo + "'") + two.var(lo + "''"))
            assert blown.comul.images[lo] == expect
            assert blown.antipode.images[lo] == blown.ring.var(hi)
            assert blown.antipode.images[hi] == blown.ring.var(lo)
            assert format_poly(tower.projection.pullback.images["u"]) == (
                f"xi{2 * n - 1}*pi^{n} + 1" if n > 1 else "xi1*pi + 1")

    def test_additive_levels(self):
        ga = additive_group()
        for n in (1, 2, 3, 4):
            tower = automatic_truncation(ga, n, limits=LIM)
            blown = tower.blown
            assert blown.name == f"Ga^({n})"
            assert blown.ring.variables == (f"xi{n}",)
            assert blown.relations.is_zero(LIM)
            two = blown.doubled_ring()
            assert blown.comul.images[f"xi{n}"] == (
                two.var(f"xi{n}'") + two.var(f"xi{n}''"))
            proj = tower.projection.pullback.images["x"]
            assert proj == blown.ring.var(f"xi{n}") * blown.ring.pi(n)
            assert len(tower.chain) == n

    def test_membership_bound(self):
        ga = additive_group()
        x = ga.ring.var("x")
        for m in range(1, 6):
            assert automatic_member(ga, x, m)
        assert not automatic_member(ga, x + 1, 1)
        gm = multiplicative_group()
        u = gm.ring.var("u")
        assert automatic_member(gm, u - 1, 3)
        assert not automatic_member(gm, u, 1)


class TestPartialBlowup:
    def test_depth_and_projection(self):
        gm = multiplicative_group()
        aug = Ideal(gm.ring, list(gm.aug_gens()))
        for n in (0, 1, 2):
            res = partial_blowup(gm, aug, n, limits=LIM)
            assert res.level == n + 1
            assert res.blown.name == f"Gm^[{n}]"
            power = "pi" if n == 0 else f"pi^{n + 1}"
            assert format_poly(res.projection.pullback.images["u"]) == (
                f"xi1*{power} + 1")
            assert check_hopf(res.blown, LIM).ok


class TestStandardSequence:
    def test_additive_tower(self):
        ga = additive_group()
        tower = automatic_truncation(ga, 3, limits=LIM)
        seq = standard_sequence(tower.projection, 3, limits=LIM)
        assert seq.depth == 3
        assert [s.group.name for s in seq.stages] == ["Ga[1]", "Ga[2]", "Ga[3]"]
        centres = [[format_poly(g) for g in s.centre.generators]
                   for s in seq.stages]
        assert centres == [["pi", "x"], ["pi", "xi1"], ["pi", "xi2"]]
        # the tower of truncations is exactly the sequence of stages
        for i, stage in enumerate(seq.stages, start=1):
            step = automatic_truncation(ga, i, limits=LIM).blown
            assert stage.group.ring.variables == step.ring.variables
            assert stage.group.relations.same_ideal(step.relations, LIM)
            assert stage.group.comul.images == step.comul.images
        assert seq.lifted.source.name == "Ga^(3)"
        xi3 = seq.lifted.source.ring.var("xi3")
        assert seq.lifted.pullback.images == {"xi3": xi3}


class TestStrictTransform:
    def test_torsion_inside_unit_blowup(self):
        gm = multiplicative_group()
        u, v = gm.ring.var("u"), gm.ring.var("v")
        b = neron_blowup(gm, identity_centre(gm), limits=LIM)
        out = strict_transform(b, Ideal(gm.ring, [u * u - 1, v - u]), limits=LIM)
        ring = out.ring
        x1, x2 = ring.var("xi1"), ring.var("xi2")
        expect = Ideal(ring, [x1 - x2, x2 * x2 * ring.pi() + x2 * 2])
        assert out.same_ideal(expect, LIM)

    def test_transform_is_pi_saturated(self):
        from neron.groebner import saturate_pi
        gm = multiplicative_group()
        u = gm.ring.var("u")
        b = neron_blowup(gm, identity_centre(gm), limits=LIM)
        out = strict_transform(b, Ideal(gm.ring, [u * u - 1]), limits=LIM)
        assert saturate_pi(out, LIM).same_ideal(out, LIM)


class TestConstancy:
    def test_multiplicative_identity(self):
        gm = multiplicative_group()
        rep = check_constancy(gm, Ideal(gm.ring, list(gm.aug_gens())), 3,
                              limits=LIM)
        assert rep.ok
        assert rep.title == "centre fibres along 3 blowups of Gm"

    def test_additive_factor(self):
        both = product(multiplicative_group(), additive_group())
        rep = check_constancy(both, Ideal(both.ring, [both.ring.var("x")]), 2,
                              limits=LIM)
        assert rep.ok


class TestUniversalLift:
    def test_deeper_truncation_lifts(self):
        gm = multiplicative_group()
        b = neron_blowup(gm, identity_centre(gm), limits=LIM)
        tower = automatic_truncation(gm, 2, limits=LIM)
        lifted = universal_lift(tower.projection, b, limits=LIM)
        assert check_morphism(lifted, LIM).ok
        rels = tower.blown.relations
        for var in gm.ring.variables:
            through = lifted.pullback(b.projection.pullback(gm.ring.var(var)))
            direct = tower.projection.pullback(gm.ring.var(var))
            assert rels.normal_form(through - direct, LIM).is_zero()

    def test_identity_does_not_lift(self):
        gm = multiplicative_group()
        b = neron_blowup(gm, identity_centre(gm), limits=LIM)
        ident = GroupMorphism("id", gm, gm, Substitution.identity(gm.ring))
        with pytest.raises(LiftFailure):
            universal_lift(ident, b, limits=LIM)


class TestRandomizedSlices:
    def test_blowups_stay_hopf_and_flat(self):
        assert suites.blowup_suite(25, seed=11) == 25

    def test_lifts(self):
        assert suites.lift_suite(8, seed=11) == 8
