"""Primitive embeddings of A2/E6/E8 sums into ADE components.

canonical_embedding places the summands at fixed chain positions (pairs
of consecutive chain roots for A2 blocks, the leading rank-6 subdiagram
for E6), which is enough because the complement class is unique in every
case the lattice sweep needs.  brute_force_catalog is the oracle backing
that uniqueness up: it enumerates actual root subsystems exhaustively
and collects the complement classes it finds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .exact import (det_bareiss, dot, express_rows,
                    gram_matrix, hnf_rows, invariant_factors, vec_mat)
from .lattice import (IntLattice, Sublattice, discriminant_lattice,
                      orthogonal_complement)
from .roots import (ADESymbol, ADEType, ade_lattice, ade_type_lattice,
                    parse_ade_type, root_type, root_type_from_roots,
                    roots_of_ade)

__all__ = [
    "Embedding", "canonical_embedding", "orthogonal_iterated",
    "enumerate_embeddings", "brute_force_catalog", "ComplementClass",
    "component_complement",
]

_A2 = ADESymbol("A", 2)
_E6 = ADESymbol("E", 6)
_E8 = ADESymbol("E", 8)


@dataclass(frozen=True)
class Embedding:
    """Images of source summands inside a target lattice.

    distribution maps a target component index to the summands placed in
    that component, stored as a tuple of (index, ADEType) pairs so the
    record stays hashable.  images holds one tuple of basis rows per
    source summand, in target coordinates, aligned with the summand
    order of ``source``.
    """

    source: ADEType
    distribution: tuple
    images: tuple

    def distribution_map(self):
        return dict(self.distribution)

    def rows(self):
        out = []
        for block in self.images:
            out.extend(list(r) for r in block)
        return out


def _unit_rows(n, positions):
    rows = []
    for p in positions:
        row = [0] * n
        row[p] = 1
        rows.append(tuple(row))
    return tuple(rows)


def _a2_blocks_by_search(target, count):
    """Backtracking placement of orthogonal A2 pairs.  Only needed for
    D_n with n = 3*count, where the fixed chain recipe runs into the
    fork at the end of the diagram."""
    lat = ade_lattice(target)
    g = [list(r) for r in lat.gram]
    roots = roots_of_ade(target)
    gcache = {}

    def pair(u, v):
        if u not in gcache:
            gcache[u] = vec_mat(list(u), g)
        return dot(gcache[u], list(v))

    adj = [(u, v) for u, v in itertools.combinations(roots, 2)
           if pair(u, v) == 1]
    chosen = []

    def clears(u, v):
        for a, b in chosen:
            if pair(a, u) or pair(a, v) or pair(b, u) or pair(b, v):
                return False
        return True

    def rec(start):
        if len(chosen) == count:
            return True
        for idx in range(start, len(adj)):
            u, v = adj[idx]
            if clears(u, v):
                chosen.append((u, v))
                if rec(idx + 1):
                    return True
                chosen.pop()
        return False

    if not rec(0):
        raise ValueError(
            f"no primitive embedding of A2^{count} into {target}")
    return list(chosen)


def canonical_embedding(summands, target):
    """Fixed-position embedding of a sum of A2/E6/E8 into one component.

    Raises ValueError "no primitive embedding ..." when the summands do
    not fit and "non-primitive ..." for E6+A2 into E8, which fits by
    rank but sits with index 3 inside its saturation.
    """
    if isinstance(summands, str):
        summands = parse_ade_type(summands)
    if summands.extra:
        raise ValueError("rank-one summands are not embeddable here")
    counts = summands.counter()
    bad = sorted(s for s in counts if s not in (_A2, _E6, _E8))
    if bad:
        raise ValueError(f"unsupported summand {bad[0]} (A2, E6, E8 only)")
    a2 = counts.get(_A2, 0)
    e6 = counts.get(_E6, 0)
    e8 = counts.get(_E8, 0)
    n = target.n
    fam = target.family

    def no_fit():
        return ValueError(
            f"no primitive embedding of {summands} into {target}")

    if summands.rank > n:
        raise no_fit()

    if e8:
        if target != _E8 or e8 > 1 or a2 or e6:
            raise no_fit()
        blocks = [_unit_rows(8, range(8))]
    elif e6:
        if fam != "E" or e6 > 1:
            raise no_fit()
        if a2:
            # E6+A2 into E8 is the one oversized case that passes the
            # rank check; its saturation is all of E8, index 3
            raise ValueError(
                f"non-primitive: {summands} in {target} spans with "
                "index 3 in its saturation")
        blocks = [_unit_rows(n, range(6))]
    elif fam == "A":
        if n < 3 * a2 - 1:
            raise no_fit()
        blocks = [_unit_rows(n, (3 * i, 3 * i + 1)) for i in range(a2)]
    elif fam == "D":
        if n < 3 * a2:
            raise no_fit()
        if 3 * a2 <= n - 1:
            blocks = [_unit_rows(n, (3 * i + 1, 3 * i + 2))
                      for i in range(a2)]
        else:
            blocks = _a2_blocks_by_search(target, a2)
    else:
        if a2 > 2:
            raise no_fit()
        blocks = [_unit_rows(n, (3 * i + 1, 3 * i + 2)) for i in range(a2)]

    emb = Embedding(summands, ((0, summands),), tuple(tuple(map(tuple, b))
                                                      for b in blocks))
    lat = ade_lattice(target)
    sub = Sublattice(lat, emb.rows())
    assert sub.is_primitive(), "canonical image lost primitivity"
    src = ade_type_lattice(summands)
    assert sub.gram() == [list(r) for r in src.gram], \
        "canonical image is not isometric to the source"
    return emb


def orthogonal_iterated(lat, parts):
    """Complement of an orthogonal family, jointly and stepwise.

    The two routes must span the same sublattice and agree on root type;
    the joint complement is returned as an IntLattice.  Raises on parts
    that are not pairwise orthogonal.
    """
    parts = list(parts)
    g = [list(r) for r in lat.gram]
    for a, b in itertools.combinations(parts, 2):
        rows_b = [list(r) for r in b.basis]
        for u in a.basis:
            gu = vec_mat(list(u), g)
            if any(dot(gu, v) for v in rows_b):
                raise ValueError("parts are not pairwise orthogonal")

    joint_rows = []
    for p in parts:
        joint_rows.extend(list(r) for r in p.basis)
    joint = orthogonal_complement(lat, Sublattice(lat, joint_rows))

    cur_rows = [[1 if i == j else 0 for j in range(lat.rank)]
                for i in range(lat.rank)]
    for p in parts:
        cur_lat = IntLattice(gram_matrix(cur_rows, g))
        coeffs = _express_int([list(r) for r in p.basis], cur_rows)
        comp = orthogonal_complement(cur_lat, Sublattice(cur_lat, coeffs))
        cur_rows = [vec_mat(list(row), cur_rows) for row in comp.basis]

    assert hnf_rows([list(r) for r in joint.basis]) == hnf_rows(cur_rows), \
        "stepwise and joint complements span different sublattices"
    out = joint.as_lattice()
    if out.rank:
        stepwise = IntLattice(gram_matrix(cur_rows, g))
        t1, _ = root_type(out)
        t2, _ = root_type(stepwise)
        assert t1 == t2, "stepwise and joint complements disagree on type"
    return out


def _express_int(rows, basis):
    coeffs = express_rows(rows, basis)
    if coeffs is None:
        raise ValueError("part does not lie in the ambient lattice")
    out = []
    for row in coeffs:
        assert all(x.denominator == 1 for x in row), \
            "expected integral coordinates on a saturated complement"
        out.append([int(x) for x in row])
    return out


# ---------------------------------------------------------------------------
# distributing summands over the components of a glued lattice


def _distributions(summand_counts, component_symbols):
    """All ways to spread the summands over the components, one
    representative per orbit of permutations of equal components."""
    kinds = sorted(summand_counts)
    totals = [summand_counts[k] for k in kinds]

    def slot_options(sym):
        opts = []
        n = sym.n
        max_a2 = {"A": (n + 1) // 3, "D": n // 3, "E": 2}[sym.family]
        for take in itertools.product(*(range(t + 1) for t in totals)):
            load = dict(zip(kinds, take))
            a2 = load.get(_A2, 0)
            e6 = load.get(_E6, 0)
            e8 = load.get(_E8, 0)
            if e8 and (sym != _E8 or e8 > 1 or a2 or e6):
                continue
            if e6 and (sym.family != "E" or e6 > 1 or a2):
                continue
            if a2 > max_a2:
                continue
            if 2 * a2 + 6 * e6 + 8 * e8 > n:
                continue
            opts.append(take)
        return opts

    per_slot = [slot_options(sym) for sym in component_symbols]
    out = []
    cur = []

    def rec(i, remaining):
        if i == len(component_symbols):
            if all(r == 0 for r in remaining):
                out.append(tuple(cur))
            return
        for take in per_slot[i]:
            if any(t > r for t, r in zip(take, remaining)):
                continue
            # canonical representative: non-increasing takes along a run
            # of isomorphic components
            if i and component_symbols[i] == component_symbols[i - 1] \
                    and take > cur[-1]:
                continue
            cur.append(take)
            rec(i + 1, tuple(r - t for r, t in zip(remaining, take)))
            cur.pop()

    rec(0, tuple(totals))

    result = []
    for dist in out:
        loads = []
        for take in dist:
            loads.append(ADEType([k for k, c in zip(kinds, take)
                                  for _ in range(c)]))
        result.append(tuple(loads))
    return result


_COMPONENT_COMPLEMENT = {}


def component_complement(sym, load):
    """Complement data of a canonically placed load inside one component.

    Returns (complement basis rows, complement gram, ADEType with
    rank-one extras, simple roots of the complement in component
    coordinates).  Cached; the same loads recur across every sweep.
    """
    key = (sym, load)
    if key in _COMPONENT_COMPLEMENT:
        return _COMPONENT_COMPLEMENT[key]

    lat = ade_lattice(sym)
    if load.rank == 0:
        rows = [[1 if i == j else 0 for j in range(sym.n)]
                for i in range(sym.n)]
        gram = [list(r) for r in lat.gram]
        t, simple = root_type(lat)
        val = (rows, gram, t, [list(r) for r in simple.basis])
    else:
        emb = canonical_embedding(load, sym)
        comp = orthogonal_complement(lat, Sublattice(lat, emb.rows()))
        rows = [list(r) for r in comp.basis]
        gram = comp.gram()
        if rows:
            t, simple = root_type(IntLattice(gram))
            amb = [vec_mat(list(s), rows) for s in simple.basis]
        else:
            t, amb = ADEType(), []
        val = (rows, gram, t, amb)
    _COMPONENT_COMPLEMENT[key] = val
    return val


def enumerate_embeddings(t0, niemeier):
    """All inequivalent embeddings of t0 into the root block of a glued lattice.

    Distributions over components are deduplicated under permutations of
    isomorphic components, realized canonically (so each summand lands
    primitively in its component), and finally deduplicated by the isometry
    invariants of the complement.  No saturation condition is imposed in the
    glued lattice itself; only the component-wise root placement counts.
    """
    syms = niemeier.root_part.symbols
    counts = t0.counter()
    for s in sorted(counts):
        if s not in (_A2, _E6, _E8):
            raise ValueError(f"unsupported summand {s} in source")

    offs = []
    off = 0
    for s in syms:
        offs.append(off)
        off += s.n
    rank = off

    out = []
    seen = set()
    for loads in _distributions(counts, syms):
        images = []
        source_syms = []
        for load, sym, o in zip(loads, syms, offs):
            if load.rank == 0:
                continue
            emb = canonical_embedding(load, sym)
            for block in emb.images:
                images.append(tuple(
                    tuple(row[j - o] if o <= j < o + sym.n else 0
                          for j in range(rank))
                    for row in block))
            source_syms.extend(load.symbols)

        inv = _complement_invariants(syms, loads)
        if inv in seen:
            continue
        seen.add(inv)

        dist = tuple((i, load) for i, load in enumerate(loads) if load.rank)
        out.append(Embedding(ADEType(source_syms), dist, tuple(images)))
    return out


def _complement_invariants(syms, loads):
    rank = 0
    det = 1
    t = ADEType()
    grams = []
    for sym, load in zip(syms, loads):
        rows, gram, full_t, _ = component_complement(sym, load)
        rank += len(rows)
        if rows:
            det *= det_bareiss(gram)
            grams.append(gram)
        t = t + full_t
    disc = tuple(d for d in invariant_factors(_block_diag(grams)) if d > 1)
    return (rank, det, disc, str(t))


def _block_diag(grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    o = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[o + i][o + j] = int(x)
        o += len(g)
    return out


# ---------------------------------------------------------------------------
# brute-force oracle


class ComplementClass(NamedTuple):
    """Isometry invariants of one complement of a primitive embedding."""

    rank: int
    det: int
    disc: tuple
    roots: int
    ade: str


_BRUTE_TARGETS = {ADESymbol("E", 6), ADESymbol("E", 7), ADESymbol("E", 8)}
_BRUTE_TARGETS |= {ADESymbol("A", n) for n in range(1, 18)}
_BRUTE_TARGETS |= {ADESymbol("D", n) for n in range(3, 17)}

_NODE_BUDGET = 20_000_000


def _f3_independent(vectors):
    """Linear independence over GF(3) of integer coordinate vectors."""
    basis = []
    for v in vectors:
        row = [x % 3 for x in v]
        for piv, pivrow in basis:
            c = row[piv]
            if c:
                row = [(a - c * b) % 3 for a, b in zip(row, pivrow)]
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            return False
        inv = 1 if row[piv] == 1 else 2
        basis.append((piv, [(inv * x) % 3 for x in row]))
    return True


def _root_setup(target):
    lat = ade_lattice(target)
    roots = list(roots_of_ade(target))
    g = [list(r) for r in lat.gram]
    idx = {r: i for i, r in enumerate(roots)}
    images = [vec_mat(list(r), g) for r in roots]
    nroots = len(roots)
    orth = []
    pair_one = []
    for i in range(nroots):
        mask = 0
        ones = []
        for j in range(nroots):
            p = dot(images[i], list(roots[j]))
            if p == 0:
                mask |= 1 << j
            elif p == 1 and j > i:
                ones.append(j)
        orth.append(mask)
        pair_one.append(ones)
    return lat, roots, g, idx, orth, pair_one


def _a2_instances(target):
    """Distinct A2 root subsystems of the target.

    Each entry is (member root mask, basis pair, orthogonal root mask,
    glue word), where the glue word w spans the subsystem's discriminant
    via w/3 and only matters mod 3.
    """
    lat, roots, g, idx, orth, pair_one = _root_setup(target)
    seen = {}
    for i in range(len(roots)):
        for j in pair_one[i]:
            u, v = roots[i], roots[j]
            w = tuple(-a - b for a, b in zip(u, v))
            members = frozenset((i, j, idx[w],
                                 idx[tuple(-a for a in u)],
                                 idx[tuple(-a for a in v)],
                                 idx[tuple(a + b for a, b in zip(u, v))]))
            if members in seen:
                continue
            mask = 0
            for r in members:
                mask |= 1 << r
            word = tuple(2 * a + b for a, b in zip(u, v))
            seen[members] = (mask, (list(u), list(v)),
                             orth[i] & orth[j], word)
    return list(seen.values()), roots, g


def _a2_tuples(a2s, compat, k, restrict_orth, sink, spend):
    """Index-ascending k-tuples of mutually orthogonal A2 instances whose
    roots all lie in restrict_orth; calls sink(chosen, orth mask)."""
    if k == 0:
        sink([], restrict_orth)
        return
    allowed_mask = 0
    for i, inst in enumerate(a2s):
        if inst[0] & restrict_orth == inst[0]:
            allowed_mask |= 1 << i

    chosen = []

    def rec(candidates, orth_mask):
        spend()
        if len(chosen) == k:
            sink(chosen, orth_mask)
            return
        c = candidates
        while c:
            i = (c & -c).bit_length() - 1
            c &= c - 1
            chosen.append(i)
            rec(c & compat[i], orth_mask & a2s[i][2])
            chosen.pop()

    rec(allowed_mask, restrict_orth)


def _saturation_word(h, g):
    """Glue word of a saturated rank-6 span: w/3 generates its
    discriminant, coordinates taken in the ambient root basis."""
    lat6 = IntLattice(gram_matrix(h, g))
    disc = discriminant_lattice(lat6)
    assert disc.invariant_factors == (3,), \
        f"saturation has unexpected discriminant {disc.invariant_factors}"
    lift = disc.generator_lifts[0]
    dim = len(h[0])
    amb = [sum(Fraction(c) * h[i][j] for i, c in enumerate(lift))
           for j in range(dim)]
    w = [3 * x for x in amb]
    assert all(x.denominator == 1 for x in w)
    return tuple(int(x) for x in w)


def _e6_instances(a2s, compat, roots, g, target, spend):
    """E6 root subsystems, found as the saturations of orthogonal A2
    triples (index 3).  Returns (basis rows, orth mask, glue word)."""
    full = (1 << len(roots)) - 1
    seen = set()
    instances = []

    def on_triple(chosen, orth_mask):
        spend()
        picked = [a2s[c] for c in chosen]
        words = [p[3] for p in picked]
        if _f3_independent(words):
            return
        glue = None
        for coeffs in itertools.product((0, 1, 2), repeat=3):
            if not any(coeffs):
                continue
            tot = [sum(c * w[j] for c, w in zip(coeffs, words))
                   for j in range(len(words[0]))]
            if all(x % 3 == 0 for x in tot):
                glue = [x // 3 for x in tot]
                break
        assert glue is not None
        if target == _E8:
            # in a unimodular ambient the orthogonal roots pin down the
            # span, so the mask is a free dedup key
            span_key = orth_mask
            if span_key in seen:
                return
        rows = [list(r) for p in picked for r in p[1]] + [glue]
        h = hnf_rows(rows)
        if target != _E8:
            span_key = tuple(map(tuple, h))
            if span_key in seen:
                return
        seen.add(span_key)
        assert len(h) == 6
        sat_gram = gram_matrix(h, g)
        assert det_bareiss(sat_gram) == 3, "saturation is not an E6"
        instances.append((h, orth_mask, _saturation_word(h, g)))

    _a2_tuples(a2s, compat, 3, full, on_triple, spend)
    return instances


def brute_force_catalog(summands, target):
    """Exhaustive catalog of primitive embeddings by complement class.

    A2 summands run over all orthogonal tuples of A2 root subsystems; an
    E6 summand runs over the index-3 saturations of A2 triples (every E6
    subsystem arises that way); E8 only fits as the whole of E8.
    Primitivity is decided by glue words over GF(3).  Overruns raise a
    budget error instead of ever truncating silently.
    """
    if isinstance(summands, str):
        summands = parse_ade_type(summands)
    if target not in _BRUTE_TARGETS:
        raise RuntimeError(
            f"search budget exceeded: target {target} is out of range")
    counts = summands.counter()
    bad = sorted(s for s in counts if s not in (_A2, _E6, _E8))
    if bad:
        raise ValueError(f"unsupported summand {bad[0]} (A2, E6, E8 only)")
    k = counts.get(_A2, 0)
    m = counts.get(_E6, 0)
    p = counts.get(_E8, 0)

    if summands.rank > target.n:
        return ()
    if p:
        if target != _E8 or p > 1 or k or m:
            return ()
        return (ComplementClass(0, 1, (), 0, "0"),)
    if m > 1:
        return ()

    lat = ade_lattice(target)
    a2s, roots, g = _a2_instances(target)
    nroots = len(roots)
    unimodular = abs(det_bareiss([list(r) for r in lat.gram])) == 1

    budget = [_NODE_BUDGET]

    def spend():
        budget[0] -= 1
        if budget[0] < 0:
            raise RuntimeError(
                f"search budget exceeded for {summands} in {target}")

    compat = []
    for i, inst in enumerate(a2s):
        m_i = 0
        for j in range(i + 1, len(a2s)):
            spend()
            if a2s[j][0] & inst[2] == a2s[j][0]:
                m_i |= 1 << j
        compat.append(m_i)

    found = set()
    type_cache = {}

    def ctype(omask):
        if omask not in type_cache:
            sel = [roots[i] for i in _bits(omask)]

            def pairing(u, v):
                return dot(vec_mat(list(u), g), list(v))

            t, _ = root_type_from_roots(sel, pairing)
            type_cache[omask] = str(t)
        return type_cache[omask]

    def record(piece_rows, src_rank, src_det, src_disc, omask):
        rcount = bin(omask).count("1")
        if unimodular:
            # complement invariants of a primitive sublattice of a
            # unimodular lattice mirror the sublattice's own
            found.add(ComplementClass(target.n - src_rank, src_det,
                                      src_disc, rcount, ctype(omask)))
            return
        rows = [r for piece in piece_rows for r in piece]
        comp = orthogonal_complement(lat, Sublattice(lat, rows))
        gram = comp.gram()
        rank = comp.rank
        det = abs(det_bareiss(gram)) if rank else 1
        disc = tuple(d for d in invariant_factors(gram) if d > 1)
        found.add(ComplementClass(rank, det, disc, rcount, ctype(omask)))

    full = (1 << nroots) - 1

    if m:
        for h, e6orth, w6 in _e6_instances(a2s, compat, roots, g,
                                           target, spend):
            def on_tuple(chosen, omask, h=h, w6=w6):
                spend()
                words = [w6] + [a2s[c][3] for c in chosen]
                if not _f3_independent(words):
                    return
                record([h] + [a2s[c][1] for c in chosen],
                       6 + 2 * k, 3 ** (k + 1), (3,) * (k + 1), omask)

            _a2_tuples(a2s, compat, k, e6orth, on_tuple, spend)
    elif k:
        def on_tuple(chosen, omask):
            spend()
            words = [a2s[c][3] for c in chosen]
            if not _f3_independent(words):
                return
            record([a2s[c][1] for c in chosen],
                   2 * k, 3 ** k, (3,) * k, omask)

        _a2_tuples(a2s, compat, k, full, on_tuple, spend)
    else:
        gram = [list(r) for r in lat.gram]
        disc = tuple(d for d in invariant_factors(gram) if d > 1)
        found.add(ComplementClass(target.n, abs(det_bareiss(gram)), disc,
                                  nroots, ctype(full)))

    return tuple(sorted(found))


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1
