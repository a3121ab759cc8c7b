"""Kodaira fibre combinatorics and the fibration-type decision rules.

A fibration on one of the catalogued surfaces is called type 1 when the
order-3 automorphism maps every fibre to itself, and type 2 when it
rotates the base with two fixed fibres.  Type 1 forces every singular
fibre to be invariant under a fibrewise order-3 symmetry, which pins the
reducible kinds down to IV, I0*, IV* and II* and kills the Mordell-Weil
rank.  Type 2 realises the surface as a degree-3 base change of a
rational elliptic surface, so the fibre configuration upstairs must be
assembled from the two ramified fibres plus orbits of three identical
fibres, with the downstairs configuration fitting into an Euler budget
of 12 and the Shioda-Tate rank bound.
"""

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product

from .roots import ADESymbol, ADEType

__all__ = [
    "KodairaFibre",
    "FibreConfiguration",
    "Type2Split",
    "euler",
    "component_count",
    "ade_of",
    "kodaira_assignments",
    "fibre_from_valuations",
    "base_change_fibre",
    "is_k3_base_change",
    "type1_assignment",
    "type2_splits",
    "classify",
]

_KINDS = ("I", "I*", "II", "III", "IV", "II*", "III*", "IV*")


@dataclass(frozen=True, order=True)
class KodairaFibre:
    """One Kodaira fibre kind; ``n`` is meaningful only for I and I*."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown Kodaira kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("fibre parameter must be non-negative")
        if self.n and self.kind not in ("I", "I*"):
            raise ValueError(f"kind {self.kind} takes no parameter")

    def __str__(self):
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    @classmethod
    def parse(cls, text):
        s = text.strip()
        if s in ("II", "III", "IV", "II*", "III*", "IV*"):
            return cls(s)
        body, star = (s[:-1], True) if s.endswith("*") else (s, False)
        if body.startswith("I") and body[1:].isdigit():
            return cls("I*" if star else "I", int(body[1:]))
        raise ValueError(f"cannot parse Kodaira fibre {text!r}")


def _f(text):
    return KodairaFibre.parse(text)


def euler(f):
    """Euler number of the fibre."""
    return {
        "I": f.n, "I*": f.n + 6, "II": 2, "III": 3, "IV": 4,
        "IV*": 8, "III*": 9, "II*": 10,
    }[f.kind]


def component_count(f):
    """Number of irreducible components."""
    if f.kind == "I":
        return max(f.n, 1)
    return {"I*": f.n + 5, "II": 1, "III": 2, "IV": 3,
            "IV*": 7, "III*": 8, "II*": 9}[f.kind]


def ade_of(f):
    """ADE symbol spanned by the non-identity components, or None."""
    if f.kind == "I":
        return ADESymbol("A", f.n - 1) if f.n >= 2 else None
    if f.kind == "I*":
        return ADESymbol("D", f.n + 4)
    return {"II": None, "III": ADESymbol("A", 1), "IV": ADESymbol("A", 2),
            "IV*": ADESymbol("E", 6), "III*": ADESymbol("E", 7),
            "II*": ADESymbol("E", 8)}[f.kind]


@dataclass(frozen=True)
class FibreConfiguration:
    """A multiset of singular fibres, stored canonically sorted.

    The Euler budget (24 for a K3, exactly 12 for a rational elliptic
    surface) depends on what the configuration is a candidate for, so it
    is checked by the consumers rather than here.
    """

    fibres: tuple

    def __post_init__(self):
        object.__setattr__(self, "fibres", tuple(sorted(self.fibres)))

    def euler_number(self):
        return sum(euler(f) for f in self.fibres)

    def ade_type(self):
        syms = [s for s in (ade_of(f) for f in self.fibres) if s is not None]
        return ADEType(tuple(syms))

    def __str__(self):
        return "{" + ", ".join(str(f) for f in self.fibres) + "}"


def _fibre_choices(sym):
    """All fibre kinds realizing one ADE symbol."""
    if sym.family == "A":
        if sym.n == 1:
            return (_f("I2"), _f("III"))
        if sym.n == 2:
            return (_f("I3"), _f("IV"))
        return (KodairaFibre("I", sym.n + 1),)
    if sym.family == "D":
        return (KodairaFibre("I*", sym.n - 4),)
    return ({6: _f("IV*"), 7: _f("III*"), 8: _f("II*")}[sym.n],)


def kodaira_assignments(t):
    """Every fibre multiset whose reducible fibres realize the ADE type.

    Only A1 and A2 admit a choice (I2 vs III and I3 vs IV); all other
    symbols determine their fibre.  Returns distinct configurations.
    """
    choices = [_fibre_choices(s) for s in t.symbols]
    seen = set()
    out = []
    for pick in product(*choices):
        key = tuple(sorted(pick))
        if key not in seen:
            seen.add(key)
            out.append(FibreConfiguration(key))
    return tuple(out)


_GENERIC_VALUATIONS = {
    "I": (0, 0, None), "I*": (2, 3, None), "II": (1, 1, 2),
    "III": (1, 2, 3), "IV": (2, 2, 4), "I0*": (2, 3, 6),
    "IV*": (3, 4, 8), "III*": (3, 5, 9), "II*": (4, 5, 10),
}


def _valuation_triple(f):
    if f.kind == "I":
        return (0, 0, f.n)
    if f.kind == "I*":
        return (2, 3, 6 + f.n)
    return _GENERIC_VALUATIONS[f.kind]


def fibre_from_valuations(v4, v6, vdelta):
    """Kodaira type from the valuations of c4, c6 and the discriminant.

    ``v4`` and ``v6`` may be ``math.inf`` when the corresponding
    quantity vanishes identically (constant j-invariant 0 or 1728).
    The triple need not be minimal; multiples of (4, 6, 12) are added
    or removed first, so negative entries (a model whose coefficients
    have poles at the place) are fine.
    """
    if vdelta is None or vdelta == math.inf:
        raise ValueError("discriminant vanishes identically; "
                         "not an elliptic surface place")
    parts = [vdelta // 12]
    if v4 != math.inf:
        parts.append(v4 // 4)
    if v6 != math.inf:
        parts.append(v6 // 6)
    k = int(min(parts))
    if k != 0:
        v4, v6, vdelta = v4 - 4 * k, v6 - 6 * k, vdelta - 12 * k

    if vdelta == 0:
        return _f("I0")
    if v4 == 0:
        assert v6 == 0, (v4, v6, vdelta)
        return KodairaFibre("I", int(vdelta))
    if v6 == 1:
        assert vdelta == 2, (v4, v6, vdelta)
        return _f("II")
    if v4 == 1:
        assert v6 >= 2 and vdelta == 3, (v4, v6, vdelta)
        return _f("III")
    if v6 == 2:
        assert vdelta == 4, (v4, v6, vdelta)
        return _f("IV")
    if v4 == 2 and v6 == 3:
        return KodairaFibre("I*", int(vdelta) - 6)
    if vdelta == 6 and v4 >= 2 and v6 >= 3:
        return _f("I0*")
    if v6 == 4:
        assert vdelta == 8, (v4, v6, vdelta)
        return _f("IV*")
    if v4 == 3:
        assert v6 >= 5 and vdelta == 9, (v4, v6, vdelta)
        return _f("III*")
    if v6 == 5:
        assert vdelta == 10, (v4, v6, vdelta)
        return _f("II*")
    raise ValueError(f"valuations ({v4}, {v6}, {vdelta}) do not match "
                     "any Kodaira type")


def base_change_fibre(f, totally_ramified):
    """Image of a fibre under a degree-3 base change.

    Unramified points pick up three copies of the same fibre; at a
    totally ramified point the valuation triple is multiplied by 3 and
    reclassified after minimalisation.  The generic representative
    triple of the kind is used, so the answer is computed, not looked
    up.
    """
    if not totally_ramified:
        return f
    v4, v6, vd = _valuation_triple(f)
    v4 = math.inf if v4 is None else 3 * v4
    v6 = math.inf if v6 is None else 3 * v6
    return fibre_from_valuations(v4, v6, 3 * vd)


def is_k3_base_change(fa, fb):
    """Does the degree-3 base change ramified at these two fibres give a K3?

    ``fa`` and ``fb`` sit on a rational elliptic surface.  The criterion
    is that one of them is of kind I* or IV while the other is I_n, II
    or III; the Euler number of the cover is audited against 24 as a
    cross-check.
    """
    ea, eb = euler(fa), euler(fb)
    if ea + eb > 12:
        raise ValueError("fibres exceed the Euler budget of a rational "
                         "elliptic surface")
    def starred(f):
        return f.kind in ("I*", "IV")

    def plain(f):
        return f.kind in ("I", "II", "III")

    verdict = (starred(fa) and plain(fb)) or (starred(fb) and plain(fa))
    cover_euler = 3 * (12 - ea - eb) \
        + euler(base_change_fibre(fa, True)) \
        + euler(base_change_fibre(fb, True))
    assert verdict == (cover_euler == 24), (fa, fb, cover_euler)
    return verdict


_TYPE1_FIBRE = {
    ADESymbol("A", 2): _f("IV"),
    ADESymbol("D", 4): _f("I0*"),
    ADESymbol("E", 6): _f("IV*"),
    ADESymbol("E", 8): _f("II*"),
}


def type1_assignment(t):
    """The fibre configuration witnessing type-1 geometry, or None.

    A fibrewise order-3 symmetry only tolerates reducible fibres of
    type IV, I0*, IV* and II*, so every symbol must be A2, D4, E6 or
    E8.  The Mordell-Weil rank condition is checked by the caller.
    """
    out = []
    for s in t.symbols:
        if s not in _TYPE1_FIBRE:
            return None
        out.append(_TYPE1_FIBRE[s])
    return FibreConfiguration(tuple(out))


@dataclass(frozen=True)
class Type2Split:
    """One admissible way to present the configuration as a base change.

    ``fa`` and ``fb`` are the fibres over the two ramification points
    upstairs; ``orbits`` holds one representative per orbit of three
    identical reducible fibres.  ``down_euler`` is the Euler number of
    the visible part of the rational configuration downstairs and
    ``down_mw_rank`` its Shioda-Tate Mordell-Weil rank.
    """

    fa: KodairaFibre
    fb: KodairaFibre
    orbits: tuple
    down_euler: int
    down_mw_rank: int

    def to_dict(self):
        return {
            "Fa": str(self.fa),
            "Fb": str(self.fb),
            "orbits": [str(f) for f in self.orbits],
            "downstairs": {"euler_visible": self.down_euler,
                           "mw_rank": self.down_mw_rank},
        }


# Reducible orbit fibres: three identical copies upstairs, one fibre of
# the same type downstairs.  A1 and A2 take the I-kind representative;
# III and IV only cost more Euler number, never less.
_ORBIT_FIBRE = {
    ADESymbol("A", 1): _f("I2"),
    ADESymbol("A", 2): _f("I3"),
    ADESymbol("A", 3): _f("I4"),
    ADESymbol("A", 4): _f("I5"),
    ADESymbol("A", 5): _f("I6"),
    ADESymbol("D", 4): _f("I0*"),
    ADESymbol("D", 5): _f("I1*"),
    ADESymbol("E", 6): _f("IV*"),
}


def _fa_options(counts):
    yield _f("I0"), None, 4, 2
    for s in counts:
        if s.family == "D" and s.n in (4, 7, 10, 13, 16):
            n = s.n - 4
            # Downstairs I_{n/3}* with (n/3)+5 components.
            yield KodairaFibre("I*", n), s, n // 3 + 6, n // 3 + 4


def _fb_options(counts):
    yield _f("I0"), None, 0, 0
    for s in counts:
        if s == ADESymbol("D", 4):
            yield _f("I0*"), s, 2, 0
        elif s == ADESymbol("E", 7):
            yield _f("III*"), s, 3, 1
        elif s.family == "A" and s.n % 3 == 2 and s.n <= 17:
            m = (s.n + 1) // 3
            yield KodairaFibre("I", 3 * m), s, m, m - 1


def type2_splits(t, mw_rank):
    """All admissible base-change presentations of the ADE type.

    Enumerates the fibre over each ramification point and the orbit
    partition of the rest, then keeps the splits whose downstairs
    rational configuration respects the Euler budget of 12 and whose
    Shioda-Tate rank is at most the upstairs Mordell-Weil rank.  The
    constraints are necessary conditions; an empty result proves the
    type impossible, a non-empty one exhibits candidate presentations.
    """
    counts = Counter(t.symbols)
    found = []
    seen = set()
    for fa, ca, ea, ma in _fa_options(counts):
        rest_a = counts.copy()
        if ca is not None:
            rest_a[ca] -= 1
            if rest_a[ca] == 0:
                del rest_a[ca]
        for fb, cb, eb, mb in _fb_options(rest_a):
            rest = rest_a.copy()
            if cb is not None:
                rest[cb] -= 1
                if rest[cb] == 0:
                    del rest[cb]
            if any(s not in _ORBIT_FIBRE or k % 3 for s, k in rest.items()):
                continue
            orbits = []
            e_orb = m_orb = 0
            for s in sorted(rest):
                rep = _ORBIT_FIBRE[s]
                for _ in range(rest[s] // 3):
                    orbits.append(rep)
                    e_orb += euler(rep)
                    m_orb += component_count(rep) - 1
            e_down = ea + eb + e_orb
            m_down = ma + mb + m_orb
            if e_down > 12:
                continue
            if not 0 <= 8 - m_down <= mw_rank:
                continue
            # Euler audit of the cover: everything away from the two
            # ramification points is tripled.
            up = 3 * (12 - ea - eb) + euler(fa) + euler(fb)
            assert up == 24, (fa, fb, up)
            key = (fa, fb, tuple(orbits))
            if key not in seen:
                seen.add(key)
                found.append(Type2Split(fa, fb, tuple(orbits), e_down,
                                        8 - m_down))
    return tuple(found)


def classify(t, mw_rank, mw_torsion=()):
    """Verdict on which fibration types can realize the frame data.

    Returns one of "Type1Only", "Type2Only", "Both", "Neither".  The
    torsion argument is part of the frame record but does not enter the
    decision; both rules depend only on the reducible-fibre type and
    the Mordell-Weil rank.
    """
    if t.extra:
        raise ValueError("fibre analysis applies to the root part only; "
                         "strip the rank-one summands")
    type1 = mw_rank == 0 and type1_assignment(t) is not None
    type2 = bool(type2_splits(t, mw_rank))
    if type1 and type2:
        return "Both"
    if type1:
        return "Type1Only"
    if type2:
        return "Type2Only"
    return "Neither"
