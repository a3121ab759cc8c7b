"""Release gate: one test per acceptance criterion, each with its time budget.

Every check pins computed output against the full catalogue values frozen
under ``data/golden/``.  Two tests fail at the time of writing and are
left failing on purpose: the computed Mordell-Weil torsion of catalogue
row 8.7 is Z/2 where the catalogue prints trivial torsion, which breaks
the full-table check (02) and the printed-torsion assertion (03).  The
golden for block 8 carries the annotation; nothing here papers over the
divergence.
"""

import json
import math
import time
from fractions import Fraction
from importlib import resources
from types import SimpleNamespace

from k3fib import cli
from k3fib.embeddings import brute_force_catalog, component_complement
from k3fib.exact import express_rows
from k3fib.fibrations import SURFACES, run_surface, select_T0
from k3fib.kodaira import KodairaFibre, base_change_fibre, classify
from k3fib.lattice import discriminant_forms_isomorphic, discriminant_lattice
from k3fib.niemeier import contains, niemeier_by_root_type, supported_root_types, verify
from k3fib.roots import ADESymbol, ADEType, ade_type_lattice, parse_ade_type, roots_of_ade
from k3fib.weierstrass import kodaira_at
from k3fib.x3 import (TABLE4, classify_x3, intersect, k_intersection,
                      pushforward_table, sigma5_configuration,
                      sigma5_type3_check, x3_configuration)

MODELS = resources.files("k3fib").joinpath("data", "models")
F = KodairaFibre.parse
INF = math.inf


def _padded_root_rows(nlat, loads):
    syms = nlat.root_part.symbols
    offs = []
    off = 0
    for s in syms:
        offs.append(off)
        off += s.n
    rows = []
    empty = ADEType()
    for c, sym in enumerate(syms):
        _, _, _, simple = component_complement(sym, loads.get(c, empty))
        for s in simple:
            r = [0] * 24
            for j, x in enumerate(s):
                r[offs[c] + j] = x
            rows.append(r)
    return rows


def _in_span(vec, rows):
    return express_rows([list(vec)], rows) is not None


def test_01_definite_complement_selection():
    start = time.monotonic()
    for k, s in SURFACES.items():
        t0 = select_T0(s.tx)
        assert t0.rank == s.tx.rank + 4, k
        iso = discriminant_forms_isomorphic(
            discriminant_lattice(ade_type_lattice(t0)),
            discriminant_lattice(s.tx))
        assert iso, k
    assert time.monotonic() - start < 1.0


def test_02_full_catalogue_blocks():
    start = time.monotonic()
    problems = []
    for k in range(1, 11):
        report = cli._cmd_kns_run(SimpleNamespace(surface=k))
        diff = cli.golden_diff(cli.golden_path(f"block_{k}.json"), report)
        for d in diff["diffs"]:
            problems.append(
                f"block {k} {d['id']}: catalogue {d['expected']!r}, "
                f"computed {d['actual']!r}")
    assert time.monotonic() - start < 300.0
    assert not problems, "; ".join(problems)


def test_03_torsion_proofs():
    rows8 = {r.row_id: r for r in run_surface(8)}

    # Row 8.3: the catalogue prints Z/2 and the computation agrees; the
    # glue vector below is an explicit order-2 class of the closure.
    assert rows8["8.3"].mw_torsion == (2,)
    nlat = niemeier_by_root_type("D10+E7^2")
    wroot = _padded_root_rows(
        nlat, {1: parse_ade_type("E6"), 2: parse_ade_type("A2")})
    eta = [Fraction(0)] * 24
    for i in (1, 3, 5, 7, 10):
        eta[i - 1] = Fraction(1, 2)
    for i in (0, 4, 6):
        eta[17 + i] = Fraction(1, 2)
    assert contains(nlat, eta)
    assert _in_span(eta, wroot)
    assert _in_span([2 * c for c in eta], wroot)

    # Row 8.7: the printed argument shows a candidate glue class whose
    # double leaves the root span, so that class certifies no torsion.
    nlat7 = niemeier_by_root_type("A11+D7+E6")
    wroot7 = _padded_root_rows(
        nlat7, {1: parse_ade_type("A2"), 2: parse_ade_type("E6")})
    half_odd_a = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2),
                  Fraction(5, 2), Fraction(3), Fraction(5, 2), Fraction(2),
                  Fraction(3, 2), Fraction(1), Fraction(1, 2)]
    mu = list(half_odd_a)
    mu += [Fraction(0), Fraction(1), Fraction(1), Fraction(1), Fraction(1),
           Fraction(1, 2), Fraction(1, 2)]
    mu += [Fraction(0)] * 6
    assert contains(nlat7, mu)
    assert not _in_span([2 * c for c in mu], wroot7)

    # The catalogue concludes trivial torsion for 8.7; the computed
    # closure disagrees (a shifted representative of the same class does
    # double into the root span).  Kept as a faithful assertion of the
    # printed value, currently failing.
    assert rows8["8.7"].mw_torsion == (), (
        "catalogue prints trivial torsion for row 8.7; "
        f"computed {rows8['8.7'].mw_torsion}")


def test_04_complement_table_audit():
    report = cli.appendix_report()
    assert report.status == "ok"
    assert all(r["index_identity"] for r in report.payload["rows"])
    diff = cli.golden_diff(cli.golden_path("appendix.json"), report)
    assert diff["ok"], diff["undocumented"]
    assert sorted(d["id"] for d in diff["documented"]) == [
        "rows.D10/A2^3.det", "rows.D16/A2^5.det", "rows.D7/A2^2.det",
    ]
    for d in diff["documented"]:
        assert "index identity" in d["note"]


def test_05_root_counts():
    start = time.monotonic()
    expected = {("A", 2): 6, ("D", 4): 24, ("E", 6): 72,
                ("E", 7): 126, ("E", 8): 240}
    for (family, n), count in expected.items():
        assert len(roots_of_ade(ADESymbol(family, n))) == count
    assert time.monotonic() - start < 1.0


def test_06_rank24_lattice_checks():
    for root_type in supported_root_types():
        checks = verify(niemeier_by_root_type(root_type))
        assert checks["even"], root_type
        assert checks["unimodular"], root_type
        assert checks["no_extra_roots"], root_type
        assert checks["ok"], root_type


def test_07_brute_force_complement_classes():
    start = time.monotonic()
    e8 = ADESymbol("E", 8)
    (one,) = brute_force_catalog("A2", e8)
    assert (one.rank, one.det, one.ade) == (6, 3, "E6")
    (two,) = brute_force_catalog("A2^2", e8)
    assert (two.rank, two.det, two.ade) == (4, 9, "A2^2")
    assert brute_force_catalog("A2^3", e8) == ()
    assert time.monotonic() - start < 120.0


TYPE1_ONLY = {
    "1.1", "1.6", "1.7", "2.1", "2.3", "3.1", "4.1", "4.7", "4.8",
    "5.1", "5.2", "6.1", "6.2", "6.8", "6.9", "7.1", "8.1", "8.6",
    "9.1", "10.1",
}
BOTH = {"10.5"}


def test_08_type_classifier_lists():
    assert {"1.1", "1.7", "4.8"} <= TYPE1_ONLY
    verdicts = {}
    for k in range(1, 11):
        for row in run_surface(k):
            verdicts[row.row_id] = classify(row.ade, row.mw_rank,
                                            row.mw_torsion)
    assert len(verdicts) == 58
    for row_id, verdict in verdicts.items():
        if row_id in BOTH:
            assert verdict == "Both", row_id
        elif row_id in TYPE1_ONLY:
            assert verdict == "Type1Only", row_id
        else:
            assert verdict == "Type2Only", row_id


def test_09_base_change_rules():
    def cubed(name):
        return base_change_fibre(F(name), True)

    assert cubed("IV") == F("I0")
    for n in range(5):
        assert cubed(f"I{n}*") == F(f"I{3 * n}*"), n
    assert cubed("II") == F("I0*")
    assert cubed("III") == F("III*")
    for m in range(9):
        assert cubed(f"I{m}") == F(f"I{3 * m}"), m


def test_10_model_equation_fibres():
    start = time.monotonic()
    expected = {
        "row_10_1": "A2+E8^2",
        "row_10_2": "A2+D16",
        "row_10_3": "D10+E7",
        "row_10_5": "E6^3",
        "row_10_6": "A11+D7",
    }
    for stem, ade in expected.items():
        report = cli._cmd_tate(
            SimpleNamespace(model=str(MODELS.joinpath(f"{stem}.json"))))
        golden_file = cli.golden_path(f"tate_{stem}.json")
        diff = cli.golden_diff(golden_file, report)
        assert diff["clean"], (stem, diff["diffs"])
        matches = (report.payload["ade"] == ade
                   and report.payload["euler"] == 24)
        if not matches:
            # The equation as published does not realize its catalogue
            # row.  The frozen per-place report is then the deliverable
            # and the golden must carry an annotated finding.
            golden = json.loads(golden_file.read_text(encoding="utf-8"))
            assert golden["findings"], stem
            assert report.payload["places"], stem
    assert time.monotonic() - start < 30.0


def test_11_quotient_surface_tables():
    start = time.monotonic()
    cfg = x3_configuration()
    for i in range(1, 7):
        fib, sec = TABLE4[i]
        triple = (intersect(cfg, fib, fib), intersect(cfg, sec, sec),
                  intersect(cfg, fib, sec))
        assert triple == (0, -2, 1), i
    kvals = {i: k_intersection(cfg, TABLE4[i][0]) for i in range(1, 7)}
    assert kvals == {1: -6, 2: 0, 3: 0, 4: 0, 5: -6, 6: 0}

    def times3(div):
        return {name: 3 * c for name, c in div.items()}

    row1 = times3({"S11": 2, "R6": 2, "S12": 4, "Et1": 2, "Ht4": 3,
                   "rt1": 1, "S1": 5, "R1": 3, "S2": 4, "lt3": 1,
                   "S3": 2, "R2": 1, "S4": 1})
    assert pushforward_table(cfg, TABLE4[1][0]) == row1
    row2 = {"R6": 1, "S12": 3, "rt1": 1, "Ht4": 3, "Et1": 2, "S1": 6,
            "R1": 4, "S2": 6, "lt3": 2, "S3": 6, "R2": 4, "S4": 6,
            "Et2": 2, "S5": 6, "R3": 4, "S6": 6, "lt1": 2, "S7": 6,
            "R4": 4, "S8": 6, "Et3": 2, "Ht6": 3, "rt3": 1, "S9": 3,
            "R5": 1}
    assert pushforward_table(cfg, TABLE4[2][0]) == row2
    row5 = times3({"Et1": 1, "S1": 2, "R1": 1, "S2": 1, "S12": 2,
                   "R6": 1, "S11": 1, "Ht4": 2, "rt1": 1, "Ht1": 1})
    assert pushforward_table(cfg, TABLE4[5][0]) == row5

    assert sigma5_type3_check(sigma5_configuration()) == 4
    assert time.monotonic() - start < 1.0


KIND_TRIPLES = {
    "I0": (0, 0, 0), "I5": (0, 0, 5), "II": (INF, 1, 2),
    "III": (1, INF, 3), "IV": (INF, 2, 4), "I0*": (2, 3, 6),
    "I2*": (2, 3, 8), "IV*": (INF, 4, 8), "III*": (3, INF, 9),
    "II*": (INF, 5, 10),
}


def test_12_cross_module_agreement():
    cfg = x3_configuration()
    verdicts = {row.row_id: classify(row.ade, row.mw_rank, row.mw_torsion)
                for row in run_surface(10)}
    for i in range(1, 7):
        kind = classify_x3(i)
        verdict = verdicts[f"10.{i}"]
        if kind == "Type1":
            assert verdict in ("Type1Only", "Both"), i
        else:
            assert verdict == "Type2Only", i
    assert intersect(cfg, TABLE4[4][0], TABLE4[4][0]) == 0

    for name, (v4, v6, vd) in KIND_TRIPLES.items():
        tripled = kodaira_at(3 * v4, 3 * v6, 3 * vd)
        assert tripled == base_change_fibre(F(name), True), name
