"""Connections of small rank on the line over R and their triviality levels.

A connection is stored by its matrix A in a chosen frame, with the action
of the derivation on the frame being minus A.  Triviality modulo pi^(n+1)
means an invertible polynomial frame change g with dg/dx = g*A at that
precision; the search is an exact linear solve over Q in the coefficients
of g, so a failure comes with the combination of balance equations that
contradict each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ShapeMismatch
from .linalg import solve_tracked
from .report import Report
from .ring import Scalar, format_scalar

AFFINE = "affine-line"
PUNCTURED = "punctured-line"


class LaurentPoly:
    """Polynomial in x and 1/x with coefficients in Q[pi]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out = {}
        for e, c in (coeffs or {}).items():
            s = c if isinstance(c, Scalar) else Scalar.from_rational(Fraction(c))
            if not s.is_zero():
                out[e] = s
        self.coeffs = out

    @classmethod
    def x_power(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Scalar()) + c
        return LaurentPoly(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Scalar()) - c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPoly({0: other})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Scalar()) + c1 * c2
        return LaurentPoly(out)

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: c * e for e, c in self.coeffs.items() if e})

    def truncate_pi(self, n: int) -> "LaurentPoly":
        """Reduce modulo pi^(n+1)."""
        return LaurentPoly({e: c.truncate(n) for e, c in self.coeffs.items()})

    def truncate_x(self, n: int) -> "LaurentPoly":
        return LaurentPoly({e: c for e, c in self.coeffs.items() if e <= n})

    def exponents(self):
        return sorted(self.coeffs)

    def coeff(self, e: int) -> Scalar:
        return self.coeffs.get(e, Scalar())


def format_laurent(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in f.exponents():
        c = format_scalar(f.coeffs[e])
        if "+" in c or "-" in c[1:]:
            c = f"({c})"
        if e == 0:
            parts.append(c)
        else:
            x = "x" if e == 1 else f"x^{e}"
            if c == "1":
                parts.append(x)
            elif c == "-1":
                parts.append(f"-{x}")
            else:
                parts.append(f"{c}*{x}")
    return " + ".join(parts).replace("+ -", "- ")


@dataclass
class Connection:
    base: str
    matrix: list

    def __post_init__(self):
        if self.base not in (AFFINE, PUNCTURED):
            raise ShapeMismatch(f"unknown base {self.base!r}")
        r = len(self.matrix)
        rows = []
        for row in self.matrix:
            if len(row) != r:
                raise ShapeMismatch("connection matrix must be square")
            rows.append([e if isinstance(e, LaurentPoly) else LaurentPoly({0: e})
                         for e in row])
        self.matrix = rows
        if self.base == AFFINE:
            for row in self.matrix:
                for e in row:
                    if e.coeffs and e.exponents()[0] < 0:
                        raise ShapeMismatch(
                            "affine-line connection entries cannot involve 1/x")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def x_degree(self) -> int:
        degs = [abs(e) for row in self.matrix for f in row for e in f.exponents()]
        return max(degs) if degs else 0

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.matrix for f in row)


def _zero_matrix(r: int):
    return [[LaurentPoly() for _ in range(r)] for _ in range(r)]


def _identity_matrix(r: int):
    out = _zero_matrix(r)
    for i in range(r):
        out[i][i] = LaurentPoly({0: 1})
    return out


def _mat_mul(a, b):
    r, m, s = len(a), len(b), len(b[0])
    out = [[LaurentPoly() for _ in range(s)] for _ in range(r)]
    for i in range(r):
        for k in range(m):
            if a[i][k].is_zero():
                continue
            for j in range(s):
                out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def formal_solution(c: Connection, order: int):
    """Truncated fundamental series Y with Y(0) = identity and Y' = -A*Y.

    Coefficients are exact; only the affine line has a formal solution at
    the origin.
    """
    if c.base != AFFINE:
        raise ShapeMismatch("formal solutions are taken at the origin of the "
                            "affine line")
    r = c.rank
    layers = [_identity_matrix(r)]
    for m in range(order):
        nxt = [[LaurentPoly() for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for j in range(r):
                acc = LaurentPoly()
                for k in range(r):
                    for e, coef in c.matrix[i][k].coeffs.items():
                        if 0 <= m - e < len(layers):
                            acc = acc + layers[m - e][k][j] * coef
                nxt[i][j] = -acc * Fraction(1, m + 1)
        layers.append(nxt)
    out = _zero_matrix(r)
    for m, layer in enumerate(layers):
        xm = LaurentPoly.x_power(m)
        for i in range(r):
            for j in range(r):
                out[i][j] = out[i][j] + layer[i][j] * xm
    return out


@dataclass
class TrivialityEntry:
    level: int
    trivial: bool
    gauge: list = None
    obstruction: list = field(default_factory=list)


@dataclass
class TrivialityReport:
    connection: Connection
    levels: dict = field(default_factory=dict)

    def trivial_through(self) -> int:
        """Largest n with every level <= n trivial; -1 when even level 0 fails."""
        n = -1
        while (n + 1) in self.levels and self.levels[n + 1].trivial:
            n += 1
        return n


def default_degree_bound(c: Connection, n: int) -> int:
    return 2 * (n + 1) * max(1, c.x_degree())


def _balance_rows(c: Connection, n: int, window, pattern):
    """Linear system for dg/dx = g*A mod pi^(n+1) with the mod-pi part of
    g frozen to the given pattern matrix.

    Unknowns are the rational coefficients of x^d*pi^p (p >= 1) in each
    entry of g; rows are labelled balance coefficients.
    """
    r = c.rank
    unknowns = [(i, j, d, p)
                for i in range(r) for j in range(r)
                for d in window for p in range(1, n + 1)]
    index = {u: t for t, u in enumerate(unknowns)}

    rows = {}

    def bump(key, col, val):
        if not val:
            return
        if key not in rows:
            rows[key] = {}
        rows[key][col] = rows[key].get(col, Fraction(0)) + val

    def emit(i, j, d, p, col, val):
        if 0 < p <= n:
            bump((i, j, d, p), col, val)
        elif p == 0:
            bump((i, j, d, 0), col, val)

    # derivative of g
    for (i, j, d, p) in unknowns:
        emit(i, j, d - 1, p, index[(i, j, d, p)], Fraction(d))
    for i in range(r):
        for j in range(r):
            for e, c0 in pattern[i][j].coeffs.items():
                for q, val in c0.coeffs.items():
                    emit(i, j, e - 1, q, None, Fraction(e) * val)
    # minus g*A
    for (i, k, d, p) in unknowns:
        for j in range(r):
            for e, cf in c.matrix[k][j].coeffs.items():
                for q, val in cf.coeffs.items():
                    if p + q <= n:
                        emit(i, j, d + e, p + q, index[(i, k, d, p)], -val)
    for i in range(r):
        for k in range(r):
            for e0, c0 in pattern[i][k].coeffs.items():
                for q0, v0 in c0.coeffs.items():
                    for j in range(r):
                        for e, cf in c.matrix[k][j].coeffs.items():
                            for q, val in cf.coeffs.items():
                                if q0 + q <= n:
                                    emit(i, j, e0 + e, q0 + q, None, -v0 * val)
    return unknowns, index, rows


def _solve_gauge(c: Connection, n: int, window, pattern):
    unknowns, index, rows = _balance_rows(c, n, window, pattern)
    keys = sorted(rows)
    matrix = []
    rhs = []
    labels = []
    for key in keys:
        i, j, d, p = key
        row = [Fraction(0)] * len(unknowns)
        const = Fraction(0)
        for col, val in rows[key].items():
            if col is None:
                const += val
            else:
                row[col] = val
        matrix.append(row)
        rhs.append(-const)
        labels.append(f"entry ({i + 1},{j + 1}), coefficient of x^{d}*pi^{p}")
    status, payload = solve_tracked(matrix, rhs, labels)
    if status != "ok":
        return None, payload
    gauge = [[LaurentPoly(dict(pattern[i][j].coeffs))
              for j in range(c.rank)] for i in range(c.rank)]
    for (i, j, d, p), t in index.items():
        if payload[t]:
            gauge[i][j] = gauge[i][j] + LaurentPoly(
                {d: Scalar({p: payload[t]})})
    return gauge, []


def _fibre_balance(c: Connection, pattern):
    """Mod-pi part of dg/dx - g*A for the frozen pattern alone.

    Unknown gauge coefficients carry pi, so only the pattern reaches the
    pi^0 layer; a nonzero coefficient here rules the pattern out before
    any linear algebra.
    """
    prod = _mat_mul(pattern, c.matrix)
    bad = []
    for i in range(c.rank):
        for j in range(c.rank):
            bal = pattern[i][j].derivative() - prod[i][j]
            for e in bal.exponents():
                q = bal.coeffs[e].coeffs.get(0)
                if q:
                    bad.append(f"entry ({i + 1},{j + 1}), coefficient of "
                               f"x^{e}*pi^0")
    return bad


def triviality_mod(c: Connection, n: int,
                   degree_bound: int = None) -> TrivialityEntry:
    """Search for an invertible gauge trivializing the connection mod pi^(n+1).

    The mod-pi part of the gauge must be a unit of the coefficient ring:
    the identity matrix on the affine line, and x^m times the identity on
    the punctured line, with m swept over the degree window.  Within the
    window the solve is exact, so for rank 1 a failure at every m yields a
    genuine obstruction certificate at this bound.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    bound = default_degree_bound(c, n) if degree_bound is None else degree_bound
    if c.base == AFFINE:
        window = range(0, bound + 1)
        shifts = [0]
    else:
        window = range(-bound, bound + 1)
        shifts = sorted(range(-bound, bound + 1), key=abs)
    solved_obstruction = None
    fibre_obstruction = None
    for m in shifts:
        pattern = _zero_matrix(c.rank)
        for i in range(c.rank):
            pattern[i][i] = LaurentPoly.x_power(m)
        bad = _fibre_balance(c, pattern)
        if bad:
            if fibre_obstruction is None:
                fibre_obstruction = bad
            continue
        gauge, obstruction = _solve_gauge(c, n, window, pattern)
        if gauge is not None:
            return TrivialityEntry(n, True, gauge, [])
        if solved_obstruction is None:
            solved_obstruction = obstruction
    return TrivialityEntry(n, False, None,
                           solved_obstruction or fibre_obstruction or [])


def check_gauge(c: Connection, entry: TrivialityEntry) -> bool:
    """Replay the horizontality identity dg/dx = g*A mod pi^(level+1)."""
    if not entry.trivial:
        return False
    g = entry.gauge
    lhs = [[e.derivative() for e in row] for row in g]
    rhs = _mat_mul(g, c.matrix)
    n = entry.level
    return all((lhs[i][j] - rhs[i][j]).truncate_pi(n).is_zero()
               for i in range(c.rank) for j in range(c.rank))


def galois_diagnostic(c: Connection, levels: int,
                      degree_bound: int = None) -> tuple:
    """Classify the blowup depth evidenced by triviality levels.

    Returns the per-level report plus a text verdict: a connection trivial
    at every tested level behaves like the full tower of identity blowups
    of its generic-fibre group; one trivial exactly below a threshold
    behaves like that many identity blowups.
    """
    rep = TrivialityReport(c)
    verdict_rep = Report(f"triviality levels 0..{levels}")
    for n in range(levels + 1):
        entry = triviality_mod(c, n, degree_bound)
        rep.levels[n] = entry
        witness = ""
        if entry.trivial:
            witness = "gauge " + format_laurent(entry.gauge[0][0]) + (
                ", ..." if c.rank > 1 else "")
        elif entry.obstruction:
            witness = "no gauge: " + "; ".join(entry.obstruction)
        verdict_rep.add("trivial modulo pi^(n+1)", f"n = {n}", entry.trivial,
                        witness)
    through = rep.trivial_through()
    if c.is_zero():
        verdict = "the connection is zero: its differential Galois group is trivial"
    elif through >= levels:
        verdict = (f"trivial through level {levels}: consistent with the full "
                   "tower of identity blowups of the generic Galois group")
    elif through >= 0:
        verdict = (f"trivial exactly below level {through + 1}: consistent with "
                   f"{through + 1} identity blowup(s) of the generic Galois group")
    else:
        verdict = ("not trivial even modulo pi: the special fibre already "
                    "carries the full group")
    return rep, verdict_rep, verdict
