"""Stock presentations: tori, vector groups, linear groups, products."""

from __future__ import annotations

from .errors import UnknownVariable
from .groebner import Ideal
from .hopf import PRIME1, PRIME2, SCALARS, HopfPresentation, tensor_ring
from .matrix import mat_adjugate, mat_det, mat_mul
from .ring import PolyRing, Substitution


def _build(name, variables, relations, comul_images, counit_values, antipode_images,
           flat=True) -> HopfPresentation:
    ring = PolyRing(tuple(variables))
    ring2 = tensor_ring(ring, (PRIME1, PRIME2))
    rels = Ideal(ring, [r(ring) for r in relations])
    comul = Substitution(ring, ring2, {v: comul_images[v](ring2) for v in ring.variables})
    counit = Substitution(ring, SCALARS, {v: SCALARS.scalar(counit_values[v]) for v in ring.variables})
    antipode = Substitution(ring, ring, {v: antipode_images[v](ring) for v in ring.variables})
    return HopfPresentation(name, ring, rels, comul, counit, antipode, flat)


def multiplicative_group(u: str = "u", v: str = "v", name: str = "Gm") -> HopfPresentation:
    """The torus: u invertible with inverse v."""
    return _build(
        name, (u, v),
        [lambda R: R.var(u) * R.var(v) - 1],
        {u: lambda R2: R2.var(u + PRIME1) * R2.var(u + PRIME2),
         v: lambda R2: R2.var(v + PRIME1) * R2.var(v + PRIME2)},
        {u: 1, v: 1},
        {u: lambda R: R.var(v), v: lambda R: R.var(u)})


def additive_group(x: str = "x", name: str = "Ga") -> HopfPresentation:
    return _build(
        name, (x,), [],
        {x: lambda R2: R2.var(x + PRIME1) + R2.var(x + PRIME2)},
        {x: 0},
        {x: lambda R: -R.var(x)})


def twisted_multiplicative(n: int, x: str = "x", y: str = "y",
                           name: str = None) -> HopfPresentation:
    """Units congruent to 1 mod pi^n, in the coordinates u = 1 + pi^n x.

    The group law is x + y + pi^n x y; at n = 0 this is the torus in
    shifted coordinates, and the generic fibre is always the torus.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    if name is None:
        name = f"Gm^({n})"
    return _build(
        name, (x, y),
        [lambda R: R.var(x) + R.var(y) + (R.var(x) * R.var(y)).mul_pi(n)],
        {x: lambda R2: R2.var(x + PRIME1) + R2.var(x + PRIME2)
            + (R2.var(x + PRIME1) * R2.var(x + PRIME2)).mul_pi(n),
         y: lambda R2: R2.var(y + PRIME1) + R2.var(y + PRIME2)
            + (R2.var(y + PRIME1) * R2.var(y + PRIME2)).mul_pi(n)},
        {x: 0, y: 0},
        {x: lambda R: R.var(y), y: lambda R: R.var(x)})


def roots_of_unity(k: int, u: str = "u", v: str = "v", name: str = None) -> HopfPresentation:
    """Kernel of the k-th power map on the torus."""
    if k < 1:
        raise ValueError("order must be positive")
    if name is None:
        name = f"mu{k}"
    base = multiplicative_group(u, v, name)
    rels = Ideal(base.ring, list(base.relations.generators) + [base.ring.var(u) ** k - 1])
    return HopfPresentation(name, base.ring, rels, base.comul, base.counit, base.antipode, True)


def trivial_group(name: str = "E") -> HopfPresentation:
    ring = PolyRing(())
    ring2 = tensor_ring(ring, (PRIME1, PRIME2))
    return HopfPresentation(name, ring, Ideal(ring, []),
                            Substitution(ring, ring2, {}),
                            Substitution(ring, SCALARS, {}),
                            Substitution(ring, ring, {}), True)


def _entry(prefix: str, i: int, j: int) -> str:
    return f"{prefix}{i + 1}{j + 1}"


def general_linear(r: int = 2, prefix: str = "a", det: str = "d",
                   name: str = None) -> HopfPresentation:
    """Invertible r x r matrices; the extra variable inverts the determinant."""
    if r < 1:
        raise ValueError("size must be positive")
    if name is None:
        name = f"GL{r}"
    names = [_entry(prefix, i, j) for i in range(r) for j in range(r)] + [det]
    ring = PolyRing(tuple(names))
    ring2 = tensor_ring(ring, (PRIME1, PRIME2))
    a = [[ring.var(_entry(prefix, i, j)) for j in range(r)] for i in range(r)]
    rels = Ideal(ring, [mat_det(a) * ring.var(det) - 1])
    a1 = [[ring2.var(_entry(prefix, i, j) + PRIME1) for j in range(r)] for i in range(r)]
    a2 = [[ring2.var(_entry(prefix, i, j) + PRIME2) for j in range(r)] for i in range(r)]
    prod = mat_mul(a1, a2)
    comul_images = {_entry(prefix, i, j): prod[i][j] for i in range(r) for j in range(r)}
    comul_images[det] = ring2.var(det + PRIME1) * ring2.var(det + PRIME2)
    adj = mat_adjugate(a)
    anti = {_entry(prefix, i, j): adj[i][j] * ring.var(det) for i in range(r) for j in range(r)}
    anti[det] = mat_det(a)
    counit = {v: 0 for v in names}
    for i in range(r):
        counit[_entry(prefix, i, i)] = 1
    counit[det] = 1
    return HopfPresentation(
        name, ring, rels,
        Substitution(ring, ring2, comul_images),
        Substitution(ring, SCALARS, {v: SCALARS.scalar(counit[v]) for v in names}),
        Substitution(ring, ring, anti), True)


def special_linear(r: int = 2, prefix: str = "a", name: str = None) -> HopfPresentation:
    if r < 1:
        raise ValueError("size must be positive")
    if name is None:
        name = f"SL{r}"
    names = [_entry(prefix, i, j) for i in range(r) for j in range(r)]
    ring = PolyRing(tuple(names))
    ring2 = tensor_ring(ring, (PRIME1, PRIME2))
    a = [[ring.var(_entry(prefix, i, j)) for j in range(r)] for i in range(r)]
    rels = Ideal(ring, [mat_det(a) - 1])
    a1 = [[ring2.var(_entry(prefix, i, j) + PRIME1) for j in range(r)] for i in range(r)]
    a2 = [[ring2.var(_entry(prefix, i, j) + PRIME2) for j in range(r)] for i in range(r)]
    prod = mat_mul(a1, a2)
    comul_images = {_entry(prefix, i, j): prod[i][j] for i in range(r) for j in range(r)}
    adj = mat_adjugate(a)
    anti = {_entry(prefix, i, j): adj[i][j] for i in range(r) for j in range(r)}
    counit = {v: 0 for v in names}
    for i in range(r):
        counit[_entry(prefix, i, i)] = 1
    return HopfPresentation(
        name, ring, rels,
        Substitution(ring, ring2, comul_images),
        Substitution(ring, SCALARS, {v: SCALARS.scalar(counit[v]) for v in names}),
        Substitution(ring, ring, anti), True)


def borel2(prefix: str = "a", det: str = "e", name: str = "B2") -> HopfPresentation:
    """Invertible upper triangular 2 x 2 matrices."""
    a11, a12, a22 = _entry(prefix, 0, 0), _entry(prefix, 0, 1), _entry(prefix, 1, 1)
    return _build(
        name, (a11, a12, a22, det),
        [lambda R: R.var(a11) * R.var(a22) * R.var(det) - 1],
        {a11: lambda R2: R2.var(a11 + PRIME1) * R2.var(a11 + PRIME2),
         a12: lambda R2: R2.var(a11 + PRIME1) * R2.var(a12 + PRIME2)
             + R2.var(a12 + PRIME1) * R2.var(a22 + PRIME2),
         a22: lambda R2: R2.var(a22 + PRIME1) * R2.var(a22 + PRIME2),
         det: lambda R2: R2.var(det + PRIME1) * R2.var(det + PRIME2)},
        {a11: 1, a12: 0, a22: 1, det: 1},
        {a11: lambda R: R.var(a22) * R.var(det),
         a12: lambda R: -R.var(a12) * R.var(det),
         a22: lambda R: R.var(a11) * R.var(det),
         det: lambda R: R.var(a11) * R.var(a22)})


def product(h1: HopfPresentation, h2: HopfPresentation, name: str = None) -> HopfPresentation:
    """Direct product; the variable names must be disjoint."""
    if set(h1.ring.variables) & set(h2.ring.variables):
        raise UnknownVariable("product factors share variable names")
    if name is None:
        name = f"{h1.name}x{h2.name}"
    ring = PolyRing(h1.ring.variables + h2.ring.variables)
    ring2 = tensor_ring(ring, (PRIME1, PRIME2))
    rels = Ideal(ring, [g.in_ring(ring) for g in h1.relations.generators]
                 + [g.in_ring(ring) for g in h2.relations.generators])
    comul_images = {}
    counit_images = {}
    anti_images = {}
    for h in (h1, h2):
        for v in h.ring.variables:
            comul_images[v] = h.comul.images[v].in_ring(ring2)
            counit_images[v] = h.counit.images[v]
            anti_images[v] = h.antipode.images[v].in_ring(ring)
    return HopfPresentation(
        name, ring, rels,
        Substitution(ring, ring2, comul_images),
        Substitution(ring, SCALARS, counit_images),
        Substitution(ring, ring, anti_images),
        h1.flat_certified and h2.flat_certified)
