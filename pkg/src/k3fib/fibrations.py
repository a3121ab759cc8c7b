"""Surface catalogue and the sweep that produces the fibration table.

For each of the ten surfaces the transcendental lattice determines a
negative definite root type T0 four ranks up with the same discriminant
form.  Sweeping T0 over the six glued rank-24 lattices and collecting
the orthogonal complements of its root-block placements yields, per
surface, the frame data of every Jacobian elliptic fibration: the ADE
type of the reducible fibres, the Mordell-Weil rank, and the torsion
read off from the primitive closure of the root part inside the glued
lattice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .embeddings import component_complement, enumerate_embeddings
from .lattice import (IntLattice, Sublattice, discriminant_forms_isomorphic,
                      discriminant_lattice, parse_lattice_spec,
                      primitive_closure)
from .niemeier import as_lattice, basis_inverse, niemeier_by_root_type, \
    supported_root_types
from .roots import ADEType, ade_type_lattice, parse_ade_type
from .exact import vec_mat

__all__ = [
    "SurfaceData", "FibrationClass", "SURFACES", "NIEMEIER_SWEEP_ORDER",
    "select_T0", "run_surface", "mw_torsion_rank0", "distribution_key",
    "admissible_torsions",
]


@dataclass(frozen=True)
class SurfaceData:
    index: int
    ns: IntLattice
    tx: IntLattice
    n_fixed_points: int
    k_fixed_curves: int
    g_max: int

    def __post_init__(self):
        assert self.ns.rank + self.tx.rank == 22, "NS and T_X ranks must fill H^2"
        assert self.ns.rank >= 12, "the sweep needs Picard number at least 12"


_SURFACE_ROWS = {
    1: ("U+A2^5", "U+U(3)+A2^3", 5, 2, 0),
    2: ("U+E6+A2^2", "U+U(3)+E6", 5, 3, 1),
    3: ("U+E8+A2", "U^2+E6", 5, 4, 2),
    4: ("U+E6+A2^3", "U+U(3)+A2^2", 6, 3, 0),
    5: ("U+E6^2", "U^2+A2^2", 6, 4, 1),
    6: ("U+E6^2+A2", "U+U(3)+A2", 7, 4, 0),
    7: ("U+E6+E8", "U^2+A2", 7, 5, 1),
    8: ("U+E6+E8+A2", "U+U(3)", 8, 5, 0),
    9: ("U+E8^2", "U^2", 8, 6, 1),
    10: ("U+E8^2+A2", "A2(-1)", 9, 6, 0),
}

SURFACES = {
    k: SurfaceData(k, parse_lattice_spec(ns), parse_lattice_spec(tx), n, c, g)
    for k, (ns, tx, n, c, g) in _SURFACE_ROWS.items()
}

# The ten admissible complements, one per surface; selection is by rank
# and determinant, then confirmed against the discriminant form.
_T0_POOL = (
    "E6+A2^4", "E6^2+A2", "E8+E6", "E6+A2^3", "E8+A2^2",
    "E6+A2^2", "E8+A2", "E6+A2", "E8", "E6",
)

# Sweep order fixed so row numbering is reproducible.
NIEMEIER_SWEEP_ORDER = (
    "E8^3", "D16+E8", "D10+E7^2", "A17+E7", "E6^4", "A11+D7+E6",
)

assert set(NIEMEIER_SWEEP_ORDER) == set(supported_root_types())


def select_T0(tx):
    """The negative definite root type paired with a transcendental lattice.

    Matches rank(T0) = rank(tx) + 4 and |det|, then insists the
    discriminant forms agree; anything short of that is an error, never
    a silent fallback.
    """
    want_rank = tx.rank + 4
    want_det = abs(tx.det())
    disc_tx = discriminant_lattice(tx)
    for cand in _T0_POOL:
        t = parse_ade_type(cand)
        if t.rank != want_rank:
            continue
        lat = ade_type_lattice(t)
        if abs(lat.det()) != want_det:
            continue
        if discriminant_forms_isomorphic(discriminant_lattice(lat), disc_tx):
            return t
        raise ValueError(
            f"candidate {t} matches rank and determinant of the "
            "transcendental lattice but not its discriminant form")
    raise ValueError(
        f"no complementary root type of rank {want_rank} and determinant "
        f"{want_det} is on record")


@dataclass(frozen=True)
class FibrationClass:
    """One row of the big table: a frame lattice and its Mordell-Weil data.

    ``ade`` is the root part of M alone; ``m_type`` additionally carries
    the rank-one (-6) summands that split off M but contribute no roots.
    """

    surface: int
    row_id: str
    niemeier: ADEType
    distribution: str
    M: IntLattice
    m_type: ADEType
    ade: ADEType
    mw_rank: int
    mw_torsion: tuple

    def __post_init__(self):
        assert self.ade == ADEType(self.m_type.symbols)
        assert all(x == -6 for x in self.m_type.extra)
        assert self.mw_rank == self.M.rank - self.ade.rank

    def to_dict(self):
        return {
            "row_id": self.row_id,
            "niemeier": str(self.niemeier),
            "distribution": self.distribution,
            "M": {
                "rank": self.M.rank,
                "det": self.M.det(),
                "roottype": str(self.m_type),
                "extra_rank": self.m_type.extra_rank,
            },
            "ade": str(self.ade),
            "mw": {"rank": self.mw_rank,
                   "torsion": list(self.mw_torsion)},
        }


def distribution_key(nlat, emb):
    """Canonical text form of which summands land in which component.

    Components appear in root-type order; within a run of isomorphic
    components the loads are listed in descending text order, so
    permuting equal components never changes the key.
    """
    syms = nlat.root_part.symbols
    dist = emb.distribution_map()
    parts = []
    i = 0
    while i < len(syms):
        j = i
        run = []
        while j < len(syms) and syms[j] == syms[i]:
            run.append(str(dist.get(j, _EMPTY)))
            j += 1
        run.sort(reverse=True)
        parts.extend(f"{syms[i]}:{load}" for load in run)
        i = j
    return ";".join(parts)


_EMPTY = ADEType()
_GLUED = {}
_ROW_IDS = None
_ADMISSIBLE = None


def _glued(nlat):
    key = str(nlat.root_part)
    if key not in _GLUED:
        _GLUED[key] = as_lattice(nlat)
    return _GLUED[key]


def _load_json(name):
    path = resources.files("k3fib").joinpath("data", name)
    return json.loads(path.read_text())


def _row_id_table():
    global _ROW_IDS
    if _ROW_IDS is None:
        _ROW_IDS = _load_json("row_ids.json")
    return _ROW_IDS


def admissible_torsions(ade):
    """Torsion groups allowed for a given ADE type, as invariant tuples."""
    global _ADMISSIBLE
    if _ADMISSIBLE is None:
        _ADMISSIBLE = {
            key: tuple(tuple(t) for t in val)
            for key, val in _load_json("torsion_admissible.json").items()
        }
    key = str(ade) if isinstance(ade, ADEType) else str(parse_ade_type(ade))
    if key not in _ADMISSIBLE:
        raise KeyError(f"no admissibility record for ADE type {key}")
    return _ADMISSIBLE[key]


def _closure_invariants(nlat, root_rows):
    """Invariant factors of (primitive closure of the span) / span in N."""
    if not root_rows:
        return ()
    binv = basis_inverse(nlat)
    coords = []
    for v in root_rows:
        x = vec_mat([int(c) for c in v], binv)
        assert all(c.denominator == 1 for c in x), \
            "root vector fell outside the glued lattice"
        coords.append([int(c) for c in x])
    big = _glued(nlat)
    _, invs = primitive_closure(big, Sublattice(big, coords))
    return tuple(invs)


def _build_row(surface, nlat, emb):
    syms = nlat.root_part.symbols
    dist = emb.distribution_map()
    offs = []
    off = 0
    for s in syms:
        offs.append(off)
        off += s.n
    rank = off

    grams = []
    m_type = ADEType()
    root_rows = []
    for c, sym in enumerate(syms):
        load = dist.get(c, _EMPTY)
        _, gram, ctype, simple = component_complement(sym, load)
        grams.append(gram)
        m_type = m_type + ctype
        for s in simple:
            root_rows.append([s[j - offs[c]] if offs[c] <= j < offs[c] + sym.n
                              else 0 for j in range(rank)])

    m_lat = IntLattice(_block_diag(grams))
    ade = ADEType(m_type.symbols)
    key = distribution_key(nlat, emb)
    table = _row_id_table()
    row_id = table.get(str(surface), {}).get(str(nlat.root_part), {}).get(key)
    assert row_id is not None, \
        f"no row id on record for surface {surface}, {nlat.root_part}, {key}"
    return FibrationClass(
        surface=surface,
        row_id=row_id,
        niemeier=nlat.root_part,
        distribution=key,
        M=m_lat,
        m_type=m_type,
        ade=ade,
        mw_rank=m_lat.rank - ade.rank,
        mw_torsion=_closure_invariants(nlat, root_rows),
    )


def _block_diag(grams):
    total = sum(len(g) for g in grams)
    out = [[0] * total for _ in range(total)]
    off = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(g)
    return out


def _sort_key(row_id):
    a, b = row_id.split(".")
    return int(a), int(b)


def run_surface(k):
    """Every fibration row for surface k, sorted by printed row number."""
    surf = SURFACES.get(k)
    if surf is None:
        raise ValueError(f"surface index must be 1..10, got {k!r}")
    t0 = select_T0(surf.tx)
    rows = []
    for name in NIEMEIER_SWEEP_ORDER:
        nlat = niemeier_by_root_type(name)
        for emb in enumerate_embeddings(t0, nlat):
            rows.append(_build_row(k, nlat, emb))
    for row in rows:
        assert row.M.rank == 24 - t0.rank == surf.ns.rank - 2
    rows.sort(key=lambda r: _sort_key(r.row_id))
    return tuple(rows)


def mw_torsion_rank0(w_det, m_det):
    """Order of W/M from determinants alone, valid when the rank is 0."""
    w = abs(int(w_det))
    m = abs(int(m_det))
    if w == 0 or m % w:
        raise ValueError(
            f"|det M| = {m} is not a multiple of |det W| = {w}")
    ratio = m // w
    r = math.isqrt(ratio)
    if r * r != ratio:
        raise ValueError(
            f"|det M| / |det W| = {ratio} is not a perfect square")
    return r
