"""Even integral lattices and their discriminant forms.

A lattice is held as a Gram matrix over Z; vectors are coordinate rows
with respect to the implied basis.  Discriminant groups come out of the
Smith form of the Gram matrix, with generator lifts kept as rational
coordinate vectors so the quadratic form Q/2Z can be evaluated exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (
    det_bareiss,
    dot,
    express_rows,
    frac_mat_inv,
    gram_matrix,
    invariant_factors,
    is_symmetric,
    left_kernel,
    mat_vec,
    right_kernel,
    smith_normal_form,
    solve_left,
    transpose,
    vec_mat,
)

__all__ = [
    "IntLattice", "QModTwo", "DiscriminantLattice", "Sublattice",
    "smith_normal_form", "discriminant_lattice", "orthogonal_complement",
    "primitive_closure", "compose", "hyperbolic_plane", "rank_one",
    "parse_lattice_spec",
]


class IntLattice:
    """Even integral lattice given by its Gram matrix.

    Degenerate Gram matrices are allowed at this level; the operations
    that need nondegeneracy check for it themselves.
    """

    __slots__ = ("gram", "labels", "_det")

    def __init__(self, gram, labels=None):
        g = [[int(x) for x in row] for row in gram]
        if not is_symmetric(g):
            raise ValueError("Gram matrix must be symmetric")
        for i in range(len(g)):
            if g[i][i] % 2:
                raise ValueError("Gram matrix has odd diagonal entry")
        self.gram = tuple(tuple(row) for row in g)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(g):
                raise ValueError("label count does not match rank")
        self.labels = labels
        self._det = None

    @property
    def rank(self):
        return len(self.gram)

    def det(self):
        if self._det is None:
            self._det = det_bareiss([list(r) for r in self.gram])
        return self._det

    def pairing(self, u, v):
        return dot(vec_mat(list(u), [list(r) for r in self.gram]), list(v))

    def norm(self, v):
        return self.pairing(v, v)

    def is_negative_definite(self):
        g = [list(r) for r in self.gram]
        n = len(g)
        for k in range(1, n + 1):
            minor = det_bareiss([row[:k] for row in g[:k]])
            if minor * (-1) ** k <= 0:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, IntLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"IntLattice(rank={self.rank}, det={self.det()})"


class QModTwo:
    """Element of Q/2Z, stored as the representative in [0, 2)."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value) % 2

    def __eq__(self, other):
        if isinstance(other, QModTwo):
            return self.value == other.value
        return self.value == Fraction(other) % 2

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other):
        return QModTwo(self.value + QModTwo(other).value)

    def __mul__(self, k):
        return QModTwo(self.value * k)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.value.numerator}/{self.value.denominator}" \
            if self.value.denominator != 1 else str(self.value.numerator)

    def __repr__(self):
        return f"QModTwo({self})"


@dataclass(frozen=True)
class DiscriminantLattice:
    """Finite quadratic form on the discriminant group of an even lattice.

    invariant_factors: orders of the cyclic summands, each > 1, dividing
    the next.  generator_lifts: rational coordinate rows (in the source
    basis) representing the chosen generators.  The source Gram matrix is
    kept to evaluate the torsion form.
    """

    invariant_factors: tuple
    generator_lifts: tuple
    source_gram: tuple = field(repr=False)

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def lift(self, elem):
        n = len(self.source_gram)
        out = [Fraction(0)] * n
        for a, g in zip(elem, self.generator_lifts):
            if a:
                for j in range(n):
                    out[j] += a * g[j]
        return out

    def q(self, elem):
        x = self.lift(elem)
        g = [list(r) for r in self.source_gram]
        return QModTwo(dot(vec_mat(x, g), x))

    def b(self, e1, e2):
        x = self.lift(e1)
        y = self.lift(e2)
        g = [list(r) for r in self.source_gram]
        return dot(vec_mat(x, g), y) % 1

    def element_order(self, elem):
        out = 1
        for a, d in zip(elem, self.invariant_factors):
            if a:
                g = _gcd(a, d)
                out = _lcm(out, d // g)
        return out

    @property
    def form(self):
        """Explicit map element -> QModTwo (small groups only)."""
        return {elem: self.q(elem) for elem in self.elements()}

    def is_isomorphic_to(self, other):
        return discriminant_forms_isomorphic(self, other)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _lcm(a, b):
    return a * b // _gcd(a, b) if a and b else 0


class Sublattice:
    """Finite-index-free subgroup of an ambient lattice, given by basis rows."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, basis):
        if not isinstance(ambient, IntLattice):
            raise ValueError("ambient must be an IntLattice")
        rows = [[int(x) for x in row] for row in basis]
        for row in rows:
            if len(row) != ambient.rank:
                raise ValueError("basis row length does not match ambient rank")
        if rows and len(invariant_factors(rows)) != len(rows):
            raise ValueError("basis rows are linearly dependent")
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in rows)

    @property
    def rank(self):
        return len(self.basis)

    def gram(self):
        return gram_matrix([list(r) for r in self.basis],
                           [list(r) for r in self.ambient.gram])

    def as_lattice(self, labels=None):
        return IntLattice(self.gram(), labels)

    def is_primitive(self):
        if not self.basis:
            return True
        return invariant_factors([list(r) for r in self.basis]) == \
            [1] * len(self.basis)

    def contains(self, vec):
        if not self.basis:
            return not any(vec)
        sol = solve_left([list(r) for r in self.basis], list(vec))
        return sol is not None and all(x.denominator == 1 for x in sol)

    def __repr__(self):
        return f"Sublattice(rank={self.rank} of ambient rank {self.ambient.rank})"


def discriminant_lattice(lat):
    """Discriminant group and quadratic form of a nondegenerate even lattice."""
    g = [list(r) for r in lat.gram]
    n = len(g)
    if n == 0:
        return DiscriminantLattice((), (), lat.gram)
    if det_bareiss(g) == 0:
        raise ValueError("singular lattice")
    D, _, V = smith_normal_form(g)
    vinv_f = frac_mat_inv(V)
    vinv = [[int(x) for x in row] for row in vinv_f]
    ginv = frac_mat_inv(g)
    factors = []
    lifts = []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            factors.append(d)
            # class of the i-th transformed unit vector, as a dual vector
            y = vinv[i]
            lifts.append(tuple(vec_mat(y, ginv)))
    return DiscriminantLattice(tuple(factors), tuple(lifts), lat.gram)


def discriminant_forms_isomorphic(d1, d2):
    """Exact isometry test for two finite quadratic forms.

    Backtracking over generator images, pruned by element order, q value
    and pairwise b values; a candidate map is accepted once its images
    generate the whole group.  Intended for the small groups this package
    meets (order a few hundred at most).
    """
    if d1.invariant_factors != d2.invariant_factors:
        return False
    if not d1.invariant_factors:
        return True
    gens1 = []
    k = len(d1.invariant_factors)
    for i in range(k):
        e = tuple(1 if j == i else 0 for j in range(k))
        gens1.append(e)
    all2 = list(d2.elements())
    info2 = {e: (d2.element_order(e), d2.q(e)) for e in all2}
    targets = []
    for i, e in enumerate(gens1):
        need_order = d1.element_order(e)
        needq = d1.q(e)
        cands = [f for f in all2
                 if info2[f][0] == need_order and info2[f][1] == needq]
        targets.append(cands)

    def group_size(images):
        seen = {tuple(0 for _ in d2.invariant_factors)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for img in images:
                    y = tuple((a + b) % d for a, b, d in
                              zip(x, img, d2.invariant_factors))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen)

    def backtrack(idx, chosen):
        if idx == k:
            return group_size(chosen) == d2.order
        for cand in targets[idx]:
            ok = True
            for prev_i in range(idx):
                if d2.b(chosen[prev_i], cand) != d1.b(gens1[prev_i], gens1[idx]):
                    ok = False
                    break
            if ok and backtrack(idx + 1, chosen + [cand]):
                return True
        return False

    return backtrack(0, [])


def orthogonal_complement(lat, sub):
    """Saturated orthogonal complement of a sublattice, in ambient coordinates."""
    if sub.ambient is not lat and sub.ambient != lat:
        raise ValueError("sublattice does not live inside the given lattice")
    if not sub.basis:
        return Sublattice(lat, [list(r) for r in _identity(lat.rank)])
    g = [list(r) for r in lat.gram]
    bt = transpose([list(r) for r in sub.basis])
    pair = [[dot(row, col) for col in zip(*bt)] for row in g]
    # pair = G * B^T ; x in complement iff x * pair = 0
    ker = left_kernel(pair)
    return Sublattice(lat, ker)


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def primitive_closure(lat, sub):
    """Saturation (Q-span of sub) intersect lat, plus quotient invariants.

    Returns (closure: Sublattice, invariants: tuple of ints > 1 describing
    closure/sub as an abelian group).
    """
    if sub.ambient is not lat and sub.ambient != lat:
        raise ValueError("sublattice does not live inside the given lattice")
    rows = [list(r) for r in sub.basis]
    n = lat.rank
    if not rows:
        return Sublattice(lat, []), ()
    rk = right_kernel(rows)
    if not rk:
        closure_rows = _identity(n)
    else:
        closure_rows = left_kernel(transpose(rk))
    closure = Sublattice(lat, closure_rows)
    coeffs = express_rows(rows, closure_rows)
    assert coeffs is not None, "closure lost the original sublattice"
    for row in coeffs:
        assert all(x.denominator == 1 for x in row), \
            "sublattice does not sit inside its own closure"
    cmat = [[int(x) for x in row] for row in coeffs]
    invs = [d for d in invariant_factors(cmat) if d > 1]
    return closure, tuple(invs)


def compose(parts):
    """Orthogonal block sum of scaled lattices.

    parts: sequence of (IntLattice, scale) with integer nonzero scales.
    """
    grams = []
    labels = []
    have_labels = True
    for idx, (lat, scale) in enumerate(parts):
        scale = int(scale)
        if scale == 0:
            raise ValueError("scale must be a nonzero integer")
        g = [[scale * x for x in row] for row in lat.gram]
        for i in range(len(g)):
            if g[i][i] % 2:
                raise ValueError("scaling produced an odd diagonal entry")
        grams.append(g)
        if lat.labels is None:
            have_labels = False
        else:
            suffix = "" if len(parts) == 1 else f".{idx + 1}"
            labels.extend(lab + suffix for lab in lat.labels)
    total = sum(len(g) for g in grams)
    big = [[0] * total for _ in range(total)]
    off = 0
    for g in grams:
        k = len(g)
        for i in range(k):
            for j in range(k):
                big[off + i][off + j] = g[i][j]
        off += k
    return IntLattice(big, labels if have_labels else None)


def hyperbolic_plane():
    return IntLattice([[0, 1], [1, 0]], ("u1", "u2"))


def rank_one(norm):
    return IntLattice([[int(norm)]], (f"x({norm})",))


def parse_lattice_spec(text):
    """Build a lattice from a sum expression like ``U+U(3)+A2^3``.

    Atoms: ``A<n>``, ``D<n>``, ``E<n>``, ``U`` and rank-one ``(-k)``;
    optional integer scale in parentheses and ``^m`` repetition.
    """
    import re

    from .roots import ADESymbol, ade_lattice

    text = text.strip()
    if not text or text == "0":
        return IntLattice([])
    parts = []
    atom_re = re.compile(
        r"^(U|[ADE]\d+|\(-?\d+\))(?:\((-?\d+)\))?(?:\^(\d+))?$")
    for piece in text.split("+"):
        piece = piece.strip()
        m = atom_re.match(piece)
        if m is None:
            raise ValueError(f"cannot parse lattice atom {piece!r}")
        base, scale, rep = m.groups()
        scale = int(scale) if scale else 1
        rep = int(rep) if rep else 1
        if base == "U":
            lat = hyperbolic_plane()
        elif base.startswith("("):
            lat = rank_one(int(base[1:-1]))
        else:
            lat = ade_lattice(ADESymbol(base[0], int(base[1:])))
        parts.extend([(lat, scale)] * rep)
    return compose(parts)
