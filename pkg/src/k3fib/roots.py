"""ADE symbols, root enumeration and root-type recognition.

Conventions, fixed once for the whole package: root lattices are
negative definite (roots have self-pairing -2) and distinct simple roots
pair to 0 or +1.  A_n is the chain a1..an.  D_n is the chain d1..d(n-1)
with dn attached to d(n-2).  E_n is the chain e2..en with e1 attached to
e4; this matches the classical numbering in which 2e1+e2+2e3+3e4+2e5+e6
is a root of E6 orthogonal to e2, e3, e5, e6.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import dot, vec_mat
from .lattice import IntLattice, Sublattice, orthogonal_complement

__all__ = [
    "ADESymbol", "ADEType", "ade_lattice", "roots_of_ade",
    "enumerate_roots", "root_type", "root_type_from_roots",
    "parse_ade_type", "short_vectors", "coset_min_norm",
]


@dataclass(frozen=True, order=True)
class ADESymbol:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in ("A", "D", "E"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "A" and self.n < 1:
            raise ValueError("A_n needs n >= 1")
        if self.family == "D" and self.n < 3:
            raise ValueError("D_n needs n >= 3")
        if self.family == "E" and self.n not in (6, 7, 8):
            raise ValueError("E_n exists for n = 6, 7, 8 only")

    def __str__(self):
        return f"{self.family}{self.n}"


class ADEType:
    """Multiset of ADE symbols plus optional non-root rank-one summands.

    ``extra`` records the self-pairings of rank-one summands that are
    orthogonal to every root, e.g. a single (-6) vector.  Stored sorted,
    compared structurally.
    """

    __slots__ = ("symbols", "extra")

    def __init__(self, symbols=(), extra=()):
        syms = []
        for s in symbols:
            if isinstance(s, str):
                s = ADESymbol(s[0], int(s[1:]))
            if not isinstance(s, ADESymbol):
                raise ValueError(f"not an ADE symbol: {s!r}")
            syms.append(s)
        self.symbols = tuple(sorted(syms))
        self.extra = tuple(sorted(int(x) for x in extra))
        if any(x >= 0 or x % 2 for x in self.extra):
            raise ValueError("extra summands must be negative even norms")

    @property
    def rank(self):
        return sum(s.n for s in self.symbols) + len(self.extra)

    @property
    def extra_rank(self):
        return len(self.extra)

    def counter(self):
        out = {}
        for s in self.symbols:
            out[s] = out.get(s, 0) + 1
        return out

    def __eq__(self, other):
        return (isinstance(other, ADEType)
                and self.symbols == other.symbols
                and self.extra == other.extra)

    def __hash__(self):
        return hash((self.symbols, self.extra))

    def __add__(self, other):
        return ADEType(self.symbols + other.symbols, self.extra + other.extra)

    def __str__(self):
        pieces = []
        for norm, group in itertools.groupby(self.extra):
            k = len(list(group))
            atom = f"({norm})"
            pieces.append(atom if k == 1 else f"{atom}^{k}")
        for sym, group in itertools.groupby(self.symbols):
            k = len(list(group))
            pieces.append(str(sym) if k == 1 else f"{sym}^{k}")
        return "+".join(pieces) if pieces else "0"

    def __repr__(self):
        return f"ADEType({self})"


_ATOM_RE = re.compile(r"^([ADE]\d+|\(-\d+\))(?:\^(\d+))?$")


def parse_ade_type(text):
    """Parse ``E8^2+A2`` or ``(-6)+E7+D10`` style strings; order-free."""
    text = text.strip()
    if not text or text == "0":
        return ADEType()
    symbols = []
    extra = []
    for piece in text.split("+"):
        piece = piece.strip()
        m = _ATOM_RE.match(piece)
        if m is None:
            raise ValueError(f"cannot parse ADE atom {piece!r}")
        base, rep = m.groups()
        rep = int(rep) if rep else 1
        if base.startswith("("):
            extra.extend([int(base[1:-1])] * rep)
        else:
            symbols.extend([ADESymbol(base[0], int(base[1:]))] * rep)
    return ADEType(symbols, extra)


def _edges_of(symbol):
    f, n = symbol.family, symbol.n
    if f == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if f == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    # E: chain over positions 1..n-1 plus the (0, 3) spur
    return [(i, i + 1) for i in range(1, n - 1)] + [(0, 3)]


@lru_cache(maxsize=None)
def ade_lattice(symbol):
    n = symbol.n
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in _edges_of(symbol):
        g[i][j] = g[j][i] = 1
    labels = tuple(f"{symbol.family.lower()}{k + 1}" for k in range(n))
    return IntLattice(g, labels)


def ade_type_lattice(t):
    """Block lattice for a full ADEType, extras appended last."""
    from .lattice import compose, rank_one

    parts = [(ade_lattice(s), 1) for s in t.symbols]
    parts += [(rank_one(x), 1) for x in t.extra]
    return compose(parts) if parts else IntLattice([])


@lru_cache(maxsize=None)
def roots_of_ade(symbol):
    """All roots in simple-root coordinates, as a tuple of tuples."""
    f, n = symbol.family, symbol.n
    out = []
    if f == "A":
        for i in range(n):
            for j in range(i, n):
                v = [0] * n
                for k in range(i, j + 1):
                    v[k] = 1
                out.append(tuple(v))
    elif f == "D":
        for i in range(n - 1):
            for j in range(i, n - 1):
                v = [0] * n
                for k in range(i, j + 1):
                    v[k] = 1
                out.append(tuple(v))
        for i in range(n - 1):
            v = [0] * n
            for k in range(i, n - 2):
                v[k] = 1
            v[n - 1] = 1
            out.append(tuple(v))
        for i in range(n - 2):
            v = [0] * n
            for k in range(i, n - 2):
                v[k] = 1
            v[n - 2] = 1
            v[n - 1] = 1
            out.append(tuple(v))
        for i in range(n - 2):
            for j in range(i + 1, n - 2):
                v = [0] * n
                for k in range(i, j):
                    v[k] = 1
                for k in range(j, n - 2):
                    v[k] = 2
                v[n - 2] = 1
                v[n - 1] = 1
                out.append(tuple(v))
    else:
        lat = ade_lattice(symbol)
        pos = [v for v, _ in short_vectors(lat.gram, 2) if any(v)]
        full = set()
        for v in pos:
            full.add(v)
            full.add(tuple(-x for x in v))
        return tuple(sorted(full))
    full = [tuple(v) for v in out] + [tuple(-x for x in v) for v in out]
    counts = {"A": n * (n + 1), "D": 2 * n * (n - 1)}
    assert len(set(full)) == counts[f], f"root count off for {symbol}"
    return tuple(sorted(full))


@lru_cache(maxsize=128)
def _ldl_float(negq):
    """Float LDL^T data for a positive definite matrix (given by rows)."""
    n = len(negq)
    d = [0.0] * n
    l = [[0.0] * n for _ in range(n)]
    for i in range(n):
        acc = float(negq[i][i])
        for k in range(i):
            acc -= d[k] * l[k][i] * l[k][i]
        if acc <= 1e-9:
            raise ValueError("matrix is not positive definite")
        d[i] = acc
        for j in range(i + 1, n):
            s = float(negq[i][j])
            for k in range(i):
                s -= d[k] * l[k][i] * l[k][j]
            l[i][j] = s / acc
    return tuple(d), tuple(tuple(row) for row in l)


def short_vectors(gram, bound, shift=None):
    """Integer x with 0 < -(x+s)G(x+s)^T <= bound for negative definite G.

    Returns (x, norm) pairs where norm is the positive number -(x+s)G(x+s).
    With shift=None the zero vector is skipped; with a shift, x+s = 0 is
    skipped if it occurs.  Floats steer the tree search with a safety
    margin; every candidate norm is recomputed exactly before it is kept.
    """
    n = len(gram)
    if n == 0:
        return []
    d, l = _ldl_float(tuple(tuple(-x for x in row) for row in gram))
    s_exact = [Fraction(x) for x in shift] if shift is not None else \
        [Fraction(0)] * n
    sf = [float(x) for x in s_exact]
    bound = Fraction(bound)
    cand = []
    x = [0] * n

    def rec(i, rem):
        if i < 0:
            cand.append(tuple(x))
            return
        t = 0.0
        for j in range(i + 1, n):
            t += l[i][j] * (x[j] + sf[j])
        center = -(sf[i] + t)
        radius = math.sqrt(rem / d[i]) if rem > 0 else 0.0
        lo = math.floor(center - radius) - 1
        hi = math.ceil(center + radius) + 1
        for xi in range(lo, hi + 1):
            term = d[i] * (xi + sf[i] + t) ** 2
            if term <= rem + 1e-9:
                x[i] = xi
                rec(i - 1, rem - term)
        x[i] = 0

    rec(n - 1, float(bound) + 1e-6)
    out = []
    for v in cand:
        y = [Fraction(c) + s for c, s in zip(v, s_exact)]
        if all(e == 0 for e in y):
            continue
        gy = [sum(gram[a][b] * y[b] for b in range(n)) for a in range(n)]
        norm = -sum(y[a] * gy[a] for a in range(n))
        if 0 < norm <= bound:
            out.append((v, norm))
    return out


def coset_min_norm(gram, shift):
    """Smallest |norm| in the coset (shift + Z^n) of a negative definite
    lattice, skipping the zero vector when the coset is the trivial one."""
    n = len(gram)
    if n == 0:
        return 0
    # Babai rounding produces a coset member; its exact norm caps the
    # search bound so a single tree pass suffices for nontrivial cosets.
    d, l = _ldl_float(tuple(tuple(-x for x in row) for row in gram))
    sf = [float(Fraction(x)) for x in shift]
    x = [0] * n
    for i in range(n - 1, -1, -1):
        t = sum(l[i][j] * (x[j] + sf[j]) for j in range(i + 1, n))
        x[i] = round(-(sf[i] + t))
    y = [Fraction(c) + Fraction(s) for c, s in zip(x, shift)]
    gy = [sum(gram[a][b] * y[b] for b in range(n)) for a in range(n)]
    cap = -sum(y[a] * gy[a] for a in range(n))
    if cap > 0:
        return min(nm for _, nm in short_vectors(gram, cap, shift))
    bound = 2
    while True:
        found = short_vectors(gram, bound, shift)
        if found:
            return min(nm for _, nm in found)
        bound += 2
        if bound > 4 * n * max(abs(x) for row in gram for x in row):
            raise RuntimeError("coset search failed to terminate")


def enumerate_roots(lat):
    """All vectors of self-pairing -2, closed under negation."""
    if lat.rank == 0:
        return []
    if not lat.is_negative_definite():
        raise ValueError("root enumeration requires a negative definite lattice")
    hits = short_vectors(lat.gram, 2)
    return sorted(v for v, nm in hits if nm == 2)


def root_type_from_roots(roots, pairing):
    """Recognise the ADE type of a root SET.

    roots: integer coordinate tuples closed under negation.
    pairing: symmetric bilinear callable on two such tuples.
    Returns (ADEType without extras, simple roots in canonical order).
    """
    if not roots:
        return ADEType(), []
    cmax = max(abs(c) for v in roots for c in v)
    base = 4 * cmax + 1
    weights = [base ** j for j in range(len(roots[0]))]

    def height(v):
        return dot(list(v), weights)

    pos = [v for v in roots if height(v) > 0]
    posset = set(pos)
    assert 2 * len(pos) == len(roots), "root set not symmetric under negation"
    simple = []
    for v in pos:
        decomposable = False
        for p in pos:
            if p != v:
                q = tuple(a - b for a, b in zip(v, p))
                if q in posset:
                    decomposable = True
                    break
        if not decomposable:
            simple.append(v)
    adj = {i: [] for i in range(len(simple))}
    for i in range(len(simple)):
        for j in range(i + 1, len(simple)):
            p = pairing(simple[i], simple[j])
            assert p in (0, 1), f"unexpected simple-root pairing {p}"
            if p:
                adj[i].append(j)
                adj[j].append(i)
    seen = set()
    comps = []
    for i in range(len(simple)):
        if i in seen:
            continue
        comp = []
        stack = [i]
        seen.add(i)
        while stack:
            k = stack.pop()
            comp.append(k)
            for nb in adj[k]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(sorted(comp))
    symbols = []
    ordered_groups = []
    for comp in comps:
        sym, order = _classify_component(comp, adj)
        symbols.append(sym)
        ordered_groups.append((sym, [simple[k] for k in order]))
    ordered_groups.sort(key=lambda sg: (sg[0], sg[1]))
    ordered = [v for _, vs in ordered_groups for v in vs]
    t = ADEType(symbols)
    expected = sum(s.n * (s.n + 1) if s.family == "A"
                   else 2 * s.n * (s.n - 1) if s.family == "D"
                   else {6: 72, 7: 126, 8: 240}[s.n]
                   for s in t.symbols)
    assert expected == len(roots), \
        f"component structure {t} does not account for all {len(roots)} roots"
    return t, ordered


def _classify_component(comp, adj):
    degs = {k: sum(1 for nb in adj[k] if nb in comp) for k in comp}
    n = len(comp)
    branch = [k for k in comp if degs[k] >= 3]
    if not branch:
        if n == 1:
            return ADESymbol("A", 1), comp
        ends = [k for k in comp if degs[k] == 1]
        assert len(ends) == 2, "path component with wrong end count"
        order = _walk_path(ends[0], adj, comp)
        return ADESymbol("A", n), order
    assert len(branch) == 1 and degs[branch[0]] == 3, \
        "component is not an ADE diagram"
    b = branch[0]
    arms = []
    for start in adj[b]:
        arm = [start]
        prev = b
        cur = start
        while True:
            nxt = [k for k in adj[cur] if k != prev]
            if not nxt:
                break
            assert len(nxt) == 1
            prev, cur = cur, nxt[0]
            arm.append(cur)
        arms.append(arm)
    arms.sort(key=len)
    lens = [len(a) for a in arms]
    assert sum(lens) + 1 == n
    if lens[0] == 1 and lens[1] == 1:
        sym = ADESymbol("D", lens[2] + 3)
    elif lens[0] == 1 and lens[1] == 2 and lens[2] in (2, 3, 4):
        sym = ADESymbol("E", lens[2] + 4)
    else:
        raise AssertionError(f"arm lengths {lens} are not an ADE diagram")
    order = [b] + [k for a in arms for k in a]
    return sym, order


def _walk_path(start, adj, comp):
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [k for k in adj[cur] if k != prev and k in comp]
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def root_type(lat):
    """(ADEType, root sublattice spanned by the simple roots).

    When the rank deficit splits off as an exact orthogonal sum of
    rank-one summands, their norms are reported in the type's ``extra``.
    """
    roots = enumerate_roots(lat)
    g = [list(r) for r in lat.gram]

    def pair(u, v):
        return dot(vec_mat(list(u), g), list(v))

    t, simple = root_type_from_roots(roots, pair)
    sub = Sublattice(lat, simple)
    deficit = lat.rank - sub.rank
    if deficit == 0:
        return t, sub
    comp = orthogonal_complement(lat, sub)
    if comp.rank == deficit:
        cg = comp.gram()
        diagonal = all(cg[i][j] == 0
                       for i in range(deficit) for j in range(deficit)
                       if i != j)
        root_det = 1
        sg = sub.gram()
        if sub.rank:
            from .exact import det_bareiss
            root_det = det_bareiss(sg)
        from .exact import det_bareiss as _det
        split_exact = abs(_det(g)) == abs(root_det * _det(cg)) if sub.rank \
            else abs(_det(g)) == abs(_det(cg))
        if diagonal and split_exact:
            t = ADEType(t.symbols, tuple(cg[i][i] for i in range(deficit)))
    return t, sub
