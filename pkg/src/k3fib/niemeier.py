"""Even unimodular rank-24 lattices built from a root system plus glue.

Only the six root systems relevant to the triples embedding A2-blocks are
wired in: E8^3, D16+E8, D10+E7^2, A17+E7, E6^4 and A11+D7+E6.  Each is
stored as its root block together with a glue code, a list of words whose
entries pick discriminant classes of the components.  Everything about a
stored lattice can be recomputed from scratch; verify() does exactly that
and reports what it finds rather than echoing the stored values.

Coordinates throughout are with respect to the simple-root basis of the
root block, in the component order of the ADE type (so glue vectors have
rational entries).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import det_bareiss, frac_mat_inv, hnf_rows, mat_mul, transpose
from .lattice import IntLattice, discriminant_lattice
from .roots import (ADEType, ade_lattice, ade_type_lattice, parse_ade_type,
                    root_type, short_vectors)

__all__ = [
    "NiemeierLattice", "niemeier_by_root_type", "supported_root_types",
    "full_basis", "basis_inverse", "as_lattice", "glue_classes", "contains",
    "verify",
]

# Glue words per root system, entries aligned with the sorted component
# order of the ADE type.  Integer entries are multiples of the cyclic
# discriminant generator; "v", "s", "c" name the three nonzero classes of
# an even D_n discriminant (v the integer-normed one, s and c the two
# half-integer classes, told apart only up to the lattice's own symmetry).
_GLUE_CODES = {
    "E8^3": (),
    "D16+E8": (("s", 0),),
    "D10+E7^2": (("s", 1, 0), ("c", 0, 1)),
    "A17+E7": ((3, 1),),
    "E6^4": ((1, 1, 1, 0), (0, 1, 2, 1)),
    "A11+D7+E6": ((1, 1, 1),),
}


@dataclass(frozen=True)
class NiemeierLattice:
    """A rank-24 lattice given by a root block and glue vectors over it."""

    root_part: ADEType
    glue_generators: tuple
    order: int

    def __str__(self):
        return f"N({self.root_part})"


def supported_root_types():
    return tuple(sorted(_GLUE_CODES))


def _component_classes(symbol):
    """Code-entry -> rational lift, in the component's own coordinates."""
    lat = ade_lattice(symbol)
    disc = discriminant_lattice(lat)
    n = symbol.n
    zero = tuple(Fraction(0) for _ in range(n))
    if not disc.invariant_factors:
        return {0: zero}
    if len(disc.invariant_factors) == 1:
        gen = tuple(disc.generator_lifts[0])
        table = {0: zero}
        for k in range(1, disc.invariant_factors[0]):
            table[k] = tuple(Fraction(k) * x for x in gen)
        return table
    # Even D_n: discriminant (Z/2)^2.  The vector class is the one whose
    # coset touches norm 1; the two spinor classes (coset minimum n/4) are
    # interchangeable, so a fixed but arbitrary tie-break (lift order)
    # assigns the names s and c.
    assert disc.invariant_factors == (2, 2)
    elems = [(1, 0), (0, 1), (1, 1)]
    lifts = {e: tuple(disc.lift(e)) for e in elems}
    vec = [e for e in elems if short_vectors(lat.gram, 1, lifts[e])]
    assert len(vec) == 1
    spinors = sorted(e for e in elems if e != vec[0])
    return {
        0: zero,
        "v": lifts[vec[0]],
        "s": lifts[spinors[0]],
        "c": lifts[spinors[1]],
    }


def _glue_vectors(rt):
    words = _GLUE_CODES[str(rt)]
    tables = [_component_classes(s) for s in rt.symbols]
    out = []
    for word in words:
        assert len(word) == len(rt.symbols)
        vec = []
        for entry, table in zip(word, tables):
            vec.extend(table[entry])
        out.append(tuple(vec))
    return tuple(out)


def glue_classes(n):
    """Every element of the glue group as a reduced 24-vector mod Z^24."""
    rank = n.root_part.rank
    zero = tuple(Fraction(0) for _ in range(rank))
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in n.glue_generators:
            nxt = tuple((a + b) % 1 for a, b in zip(cur, g))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def niemeier_by_root_type(rt):
    """Look up one of the six lattices by its root system."""
    if isinstance(rt, str):
        rt = parse_ade_type(rt)
    key = str(rt)
    if key not in _GLUE_CODES:
        raise ValueError(
            f"no glue code stored for root type {key}; "
            f"supported: {', '.join(supported_root_types())}")
    gens = _glue_vectors(rt)
    n = NiemeierLattice(rt, gens, 0)
    order = len(glue_classes(n))
    return NiemeierLattice(rt, gens, order)


def full_basis(n):
    """Basis of the glued lattice over Z, rows in root coordinates."""
    rank = n.root_part.rank
    denom = 1
    for v in n.glue_generators:
        for x in v:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    rows = [[denom if i == j else 0 for j in range(rank)] for i in range(rank)]
    rows += [[int(x * denom) for x in v] for v in n.glue_generators]
    h = hnf_rows(rows)
    assert len(h) == rank
    return [[Fraction(x, denom) for x in row] for row in h]


_BASIS_INV = {}


def basis_inverse(n):
    """Inverse of full_basis(n), cached; converts root coords to basis coords.

    A vector v in simple-root coordinates has x = v @ basis_inverse(n) as
    its coordinates over full_basis(n); x is integral exactly when v lies
    in the glued lattice.
    """
    key = str(n.root_part)
    if key not in _BASIS_INV:
        _BASIS_INV[key] = frac_mat_inv([list(r) for r in full_basis(n)])
    return _BASIS_INV[key]


def as_lattice(n):
    """The glued lattice as an IntLattice in its Hermite basis."""
    b = full_basis(n)
    g = [list(r) for r in ade_type_lattice(n.root_part).gram]
    gram = mat_mul(mat_mul(b, g), transpose(b))
    out = []
    for row in gram:
        assert all(x.denominator == 1 for x in row), "glue is not integral"
        out.append([int(x) for x in row])
    return IntLattice(out)


def contains(n, v):
    """Is the rational root-coordinate vector v in the glued lattice?"""
    cls = tuple(Fraction(x) % 1 for x in v)
    return cls in set(glue_classes(n))


_COMPONENT_ROOT_TYPE = {}
_COMPONENT_COSET_MIN = {}


def _component_spans(rt):
    """(symbol, offset) pairs in storage order."""
    out = []
    off = 0
    for sym in rt.symbols:
        out.append((sym, off))
        off += sym.n
    return out


def _class_is_rootless(rt, shift):
    """No vector of norm 2 or below in the coset shift + Z^rank.

    The Gram matrix is block diagonal, so the coset minimum is exactly
    the sum of per-component coset minima.  Components are searched only
    up to norm 2; an empty bounded search already pushes the total past
    the threshold.
    """
    total = Fraction(0)
    for sym, off in _component_spans(rt):
        part = tuple(shift[off:off + sym.n])
        if all(x == 0 for x in part):
            continue
        key = (sym, part)
        if key not in _COMPONENT_COSET_MIN:
            found = short_vectors(ade_lattice(sym).gram, 2, part)
            _COMPONENT_COSET_MIN[key] = (
                min(nm for _, nm in found) if found else None)
        m = _COMPONENT_COSET_MIN[key]
        if m is None:
            return True
        total += m
    return total > 2


def verify(n):
    """Recompute every claim about n from its defining data.

    Returns a dict of booleans; nothing in it is copied from the input.
    """
    rlat = ade_type_lattice(n.root_part)
    assert not n.root_part.extra
    found = ADEType()
    for sym in n.root_part.symbols:
        if sym not in _COMPONENT_ROOT_TYPE:
            _COMPONENT_ROOT_TYPE[sym] = root_type(ade_lattice(sym))[0]
        found = found + _COMPONENT_ROOT_TYPE[sym]
    report = {"root_part_recomputed": found == n.root_part}

    classes = glue_classes(n)
    report["glue_order_matches"] = (
        len(classes) == n.order and n.order * n.order == abs(rlat.det()))

    b = full_basis(n)
    g = [list(r) for r in rlat.gram]
    gram = mat_mul(mat_mul(b, g), transpose(b))
    integral = all(x.denominator == 1 for row in gram for x in row)
    report["even"] = integral and all(
        gram[i][i].numerator % 2 == 0 for i in range(len(gram)))
    if integral:
        det = det_bareiss([[int(x) for x in row] for row in gram])
        report["unimodular"] = det == 1
    else:
        report["unimodular"] = False

    # No roots beyond the root block: every nonzero glue class must stay
    # clear of norm -2 vectors.
    report["no_extra_roots"] = all(
        _class_is_rootless(n.root_part, shift)
        for shift in classes if any(x != 0 for x in shift))

    report["ok"] = all(report[k] for k in (
        "root_part_recomputed", "glue_order_matches", "even", "unimodular",
        "no_extra_roots"))
    return report
