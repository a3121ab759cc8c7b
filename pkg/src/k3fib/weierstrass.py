"""Long Weierstrass models over the rational function field.

An elliptic surface over the projective line is handled through a long
Weierstrass equation with coefficients in Q(t).  The classical b- and
c-quantities and the discriminant are computed exactly; for a place of
Q(t) (a monic polynomial factor, or the point at infinity through the
substitution t -> 1/s) the valuation triple of (c4, c6, delta)
determines the Kodaira fibre after shifting by multiples of (4, 6, 12),
so non-minimal equations and coefficient poles need no preparation.
Candidate places come from squarefree parts of the three invariants
refined into a pairwise-coprime basis; fibre types never need an
irreducible factorization.

The degree-3 base change t -> t^3 and the restriction of a plane pencil
to a parametrized rational curve (with its ramification divisor) cover
the two geometric constructions used to put the catalogued fibrations
on actual equations.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import cached_property

import sympy
from sympy import Poly, Symbol, sympify

from .kodaira import KodairaFibre, ade_of, euler, fibre_from_valuations
from .roots import ADEType

__all__ = [
    "T",
    "RatFunc",
    "WeierstrassModel",
    "Place",
    "RestrictedPencil",
    "invariants",
    "places_and_valuations",
    "kodaira_at",
    "ade_of_model",
    "base_change_cubed",
    "restrict_pencil",
    "model_from_dict",
    "load_model",
]

T = Symbol("t")


def _poly(expr):
    return Poly(sympify(expr), T, domain="QQ")


def _multiplicity(poly, p):
    count = 0
    while poly.degree() >= p.degree():
        quo, rem = divmod(poly, p)
        if not rem.is_zero:
            break
        poly = quo
        count += 1
    return count


def _as_ratfunc(value):
    if isinstance(value, RatFunc):
        return value
    return RatFunc(_poly(value), _poly(1))


@dataclass(frozen=True)
class RatFunc:
    """Reduced fraction of rational polynomials in t, monic denominator."""

    num: Poly
    den: Poly

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = _poly(1)
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num.quo(g), den.quo(g)
            lc = den.LC()
            if lc != 1:
                num, den = num.quo_ground(lc), den.quo_ground(lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def parse(cls, num, den="1"):
        return cls(_poly(num), _poly(den))

    @property
    def is_zero(self):
        return self.num.is_zero

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def __str__(self):
        return str(self.as_expr())

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) + (-self)

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise ValueError("negative powers are not needed here")
        out = _as_ratfunc(1)
        for _ in range(exponent):
            out = out * self
        return out

    def valuation(self, p):
        """Order of vanishing at the monic polynomial p, negative at poles."""
        if self.is_zero:
            return math.inf
        return _multiplicity(self.num, p) - _multiplicity(self.den, p)

    def compose(self, inner):
        """Substitute t -> inner(t) for a polynomial inner."""
        return RatFunc(self.num.compose(inner), self.den.compose(inner))


def _reversed_poly(poly):
    return Poly(list(reversed(poly.all_coeffs())), T, domain="QQ")


def _flipped(f, weight):
    """f(1/t) * t**weight, the coefficient transform for the chart at infinity."""
    if f.is_zero:
        return f
    shift = weight + f.den.degree() - f.num.degree()
    num, den = _reversed_poly(f.num), _reversed_poly(f.den)
    tpow = Poly(T ** abs(shift), T, domain="QQ")
    if shift >= 0:
        return RatFunc(num * tpow, den)
    return RatFunc(num, den * tpow)


@dataclass(frozen=True)
class WeierstrassModel:
    """Surface y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q(t)."""

    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    a4: RatFunc
    a6: RatFunc

    @cached_property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self):
        out = (self.a1 * self.a1 * self.a6 + 4 * self.a2 * self.a6
               - self.a1 * self.a3 * self.a4 + self.a2 * self.a3 * self.a3
               - self.a4 * self.a4)
        assert (4 * out - (self.b2 * self.b6 - self.b4 * self.b4)).is_zero
        return out

    @cached_property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self):
        return (-self.b2 * self.b2 * self.b2 + 36 * self.b2 * self.b4
                - 216 * self.b6)

    @cached_property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        out = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        check = self.c4 * self.c4 * self.c4 - self.c6 * self.c6 - 1728 * out
        assert check.is_zero
        return out


def model_from_dict(data):
    """Build a model from {"a1": {"num": ..., "den": ...}, ...}.

    Missing coefficients are zero; a missing denominator is 1.
    """
    known = ("a1", "a2", "a3", "a4", "a6")
    unknown = set(data) - set(known)
    if unknown:
        raise ValueError(f"unknown coefficient keys: {sorted(unknown)}")
    coeffs = []
    for key in known:
        entry = data.get(key)
        if entry is None:
            coeffs.append(RatFunc.parse(0))
        else:
            coeffs.append(RatFunc.parse(entry["num"], entry.get("den", "1")))
    return WeierstrassModel(*coeffs)


def load_model(path):
    with open(path, encoding="utf-8") as handle:
        return model_from_dict(json.load(handle))


def invariants(model):
    """(c4, c6, discriminant) of the model.

    Raises if the discriminant vanishes identically: the equation then
    defines no elliptic surface.
    """
    if model.discriminant.is_zero:
        raise ValueError("not an elliptic surface")
    return model.c4, model.c6, model.discriminant


@dataclass(frozen=True)
class Place:
    """A closed point of the projective t-line.

    Either a monic polynomial (degree = residue degree, so a degree-3
    factor counts three geometric points in one Galois orbit) or the
    point at infinity, stored as None.
    """

    poly: Poly | None = None

    @property
    def degree(self):
        return 1 if self.poly is None else self.poly.degree()

    @property
    def at_infinity(self):
        return self.poly is None

    def __str__(self):
        return "oo" if self.poly is None else str(self.poly.as_expr())


def _coprime_basis(parts):
    """Pairwise-coprime monic polynomials covering the same factors."""
    work = [p.monic() for p in parts if p.degree() > 0]
    basis = []
    while work:
        f = work.pop()
        if f.degree() == 0:
            continue
        for i, b in enumerate(basis):
            g = f.gcd(b)
            if g.degree() > 0:
                del basis[i]
                work.extend((g, b.quo(g), f.quo(g)))
                break
        else:
            basis.append(f)
    return basis


def _interesting(triple):
    v4, v6, vdelta = triple
    return vdelta != 0 or min(v4, v6) < 0


def _infinity_chart(model):
    """The model rewritten in the chart at infinity.

    Substituting t -> 1/s alone gives coefficients with poles at s = 0;
    rescaling (x, y) -> (x/s^(2w), y/s^(3w)) multiplies each a_i by
    s^(i w), and the smallest w making every coefficient regular at
    s = 0 is used.  Valuations of the resulting invariants at s = 0 are
    the valuations at infinity (the rescale shifts triples by multiples
    of (4, 6, 12), which the fibre classification quotients out).
    """
    w = 0
    weighted = ((1, model.a1), (2, model.a2), (3, model.a3),
                (4, model.a4), (6, model.a6))
    for i, f in weighted:
        if not f.is_zero:
            diff = f.num.degree() - f.den.degree()
            w = max(w, -((-diff) // i))
    return WeierstrassModel(*(_flipped(f, i * w) for i, f in weighted))


def places_and_valuations(model):
    """Places with their (v(c4), v(c6), v(delta)) triples.

    Lists every place where delta has a zero or a pole, plus any place
    where c4 or c6 has a pole; smooth places where only c4 or c6
    vanishes are skipped.  Triple entries can be negative and, for an
    identically vanishing c4 or c6, math.inf.
    """
    c4, c6, disc = invariants(model)
    parts = []
    for fun in (c4, c6, disc):
        if not fun.is_zero:
            for poly in (fun.num, fun.den):
                parts.extend(q for q, _ in poly.sqf_list()[1])
    listed = []
    for b in _coprime_basis(parts):
        triple = (c4.valuation(b), c6.valuation(b), disc.valuation(b))
        if _interesting(triple):
            listed.append((Place(b), triple))
    listed.sort(key=lambda item: (item[0].degree, str(item[0])))

    flip = _infinity_chart(model)
    at_t = _poly(T)
    triple = tuple(f.valuation(at_t)
                   for f in (flip.c4, flip.c6, flip.discriminant))
    if _interesting(triple):
        listed.append((Place(None), triple))
    return tuple(listed)


def kodaira_at(v4, v6, vdelta):
    """Kodaira fibre of a valuation triple (minimalized internally)."""
    return fibre_from_valuations(v4, v6, vdelta)


def ade_of_model(model):
    """Total ADE type and Euler number, places weighted by degree."""
    total = 0
    symbols = []
    for place, (v4, v6, vdelta) in places_and_valuations(model):
        fibre = kodaira_at(v4, v6, vdelta)
        total += place.degree * euler(fibre)
        symbol = ade_of(fibre)
        if symbol is not None:
            symbols.extend([symbol] * place.degree)
    return ADEType(symbols), total


def base_change_cubed(model):
    """Pull the family back along the base map t -> t^3."""
    cube = Poly(T ** 3, T, domain="QQ")
    return WeierstrassModel(model.a1.compose(cube), model.a2.compose(cube),
                            model.a3.compose(cube), model.a4.compose(cube),
                            model.a6.compose(cube))


@dataclass(frozen=True)
class RestrictedPencil:
    """A plane pencil restricted to a parametrized rational curve."""

    coords: tuple
    ramification: tuple


def restrict_pencil(f, g, rho, xyz=None, uvars=None, method="symbolic"):
    """Restrict the pencil spanned by f and g to the curve rho draws.

    f and g are homogeneous forms in the plane coordinates (symbols
    x, y, z unless xyz says otherwise); rho is a triple of binary forms
    in the curve coordinates (u1, u2 by default), free to carry extra
    parameter symbols.  The composed map [f(rho) : g(rho)] is reduced
    by its full polynomial gcd, parameter content included, and comes
    back with the zero divisor of the u-derivative determinant; its
    factors are the ramification points of the restricted map, the
    factor u2 being the point [1:0].

    method="sampled" additionally rechecks the cancelled gcd degree at
    25 random rational parameter values and insists on unanimity, for
    the case where the symbolic gcd is suspected of being wrong or too
    expensive to trust.
    """
    if xyz is None:
        xyz = sympy.symbols("x y z")
    if uvars is None:
        uvars = sympy.symbols("u1 u2")
    u1, u2 = uvars
    with_rho = dict(zip(xyz, rho))
    a_raw = sympy.expand(sympify(f).subs(with_rho, simultaneous=True))
    b_raw = sympy.expand(sympify(g).subs(with_rho, simultaneous=True))
    if a_raw == 0 and b_raw == 0:
        raise ValueError("pencil member contained in base locus")
    if a_raw == 0 or b_raw == 0:
        raise ValueError("restriction collapses to a constant map")
    common = sympy.gcd(a_raw, b_raw)
    a = sympy.expand(sympy.cancel(a_raw / common))
    b = sympy.expand(sympy.cancel(b_raw / common))
    if method == "sampled":
        _sampled_gcd_check(a_raw, b_raw, common, uvars)
    elif method != "symbolic":
        raise ValueError(f"unknown method {method!r}")

    wronskian = sympy.expand(sympy.diff(a, u1) * sympy.diff(b, u2)
                             - sympy.diff(a, u2) * sympy.diff(b, u1))
    ramification = []
    if wronskian != 0:
        for factor, mult in sympy.factor_list(wronskian)[1]:
            if factor.has(u1) or factor.has(u2):
                ramification.append((factor, mult))
    ramification.sort(key=lambda item: sympy.default_sort_key(item[0]))
    return RestrictedPencil((a, b), tuple(ramification))


def _udegree(expr, uvars):
    if expr.has(*uvars):
        return sympy.Poly(expr, *uvars).total_degree()
    return 0


def _sampled_gcd_check(a, b, common, uvars):
    expected = _udegree(common, uvars)
    params = sorted((a.free_symbols | b.free_symbols) - set(uvars), key=str)
    if not params:
        return
    rng = random.Random(20240830)
    agreeing = 0
    for _ in range(200):
        if agreeing == 25:
            break
        point = {p: sympy.Rational(rng.randint(-60, 60), rng.randint(1, 40))
                 for p in params}
        av = sympy.expand(a.subs(point, simultaneous=True))
        bv = sympy.expand(b.subs(point, simultaneous=True))
        if av == 0 or bv == 0:
            continue
        if _udegree(sympy.gcd(av, bv), uvars) != expected:
            raise ValueError("sampled reduction disagrees with the "
                             "symbolic gcd")
        agreeing += 1
    else:
        raise ValueError("could not find 25 nondegenerate parameter samples")
