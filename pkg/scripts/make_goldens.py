"""Regenerate the golden files under src/k3fib/data/golden/.

Goldens store catalogue values: wherever the published tables and the
computation agree (everywhere but the three cases below) the payload is
simply the canonical Report payload.  Three divergences are known and
deliberate; the golden keeps the catalogue value and documents the
difference in a ``findings`` list so that golden_diff can tell a
documented discrepancy from a regression:

* block_8: the catalogue prints trivial torsion for row 8.7 while the
  computed section-lattice closure contains a 2-torsion class;
* appendix: three complement Gram matrices are printed with a corrupt
  bottom corner and fail the index identity (D7/A2^2 det 44 vs 36,
  D10/A2^3 det 164 vs 108, D16/A2^5 det 2284 vs 972);
* tate rows 10.1 and 10.5: the published equations do not realize the
  catalogue rows they are labelled with (Euler 180 with a dropped
  leading digit; a swapped frame label).  Those goldens freeze what the
  equations actually compute, with notes.

Run from the repository root:  python3 scripts/make_goldens.py
"""

import json
import sys
from pathlib import Path
from types import SimpleNamespace

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from k3fib import cli  # noqa: E402

GOLDEN = ROOT / "src" / "k3fib" / "data" / "golden"
MODELS = ROOT / "src" / "k3fib" / "data" / "models"


def write_golden(name, report, findings=()):
    doc = {
        "command": list(report.command),
        "payload": cli._canonical(report.payload),
        "findings": list(findings),
    }
    path = GOLDEN / name
    path.write_text(
        json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


def check(name, report):
    diff = cli.golden_diff(GOLDEN / name, report)
    tag = "clean" if diff["clean"] else f"{len(diff['documented'])} documented finding(s)"
    if not diff["ok"]:
        raise SystemExit(f"{name}: undocumented diffs {diff['undocumented']}")
    print(f"  {name}: {tag}")


def blocks():
    for k in range(1, 11):
        report = cli._cmd_kns_run(SimpleNamespace(surface=k))
        findings = []
        payload = cli._canonical(report.payload)
        if k == 8:
            for row in payload["rows"]:
                if row["row_id"] == "8.7":
                    assert row["mw"]["torsion"] == [2]
                    row["mw"]["torsion"] = []
            findings.append(
                {
                    "id": "rows.8.7.mw.torsion",
                    "note": (
                        "catalogue value: trivial torsion. The computed "
                        "section-lattice closure contains a 2-torsion class "
                        "(the closure test 2*mu in the root span fails), so "
                        "the computation reports Z/2. The golden keeps the "
                        "catalogue value and flags the divergence."
                    ),
                }
            )
            doc = {"command": list(report.command), "payload": payload,
                   "findings": findings}
            (GOLDEN / f"block_{k}.json").write_text(
                json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
        else:
            write_golden(f"block_{k}.json", report)
        check(f"block_{k}.json", report)


def appendix():
    report = cli.appendix_report()
    payload = cli._canonical(report.payload)
    printed = {"D7/A2^2": 44, "D10/A2^3": 164, "D16/A2^5": 2284}
    findings = []
    for row in payload["rows"]:
        rid = row["id"]
        if rid in printed:
            computed = row["det"]
            row["det"] = printed[rid]
            findings.append(
                {
                    "id": f"rows.{rid}.det",
                    "note": (
                        f"catalogue Gram for {rid} has |det| {printed[rid]}, "
                        f"which fails the index identity; the computed "
                        f"complement has |det| {computed} with integral "
                        f"index {row['index']}. The golden keeps the "
                        f"catalogue determinant and flags the divergence."
                    ),
                }
            )
    doc = {"command": list(report.command), "payload": payload,
           "findings": findings}
    (GOLDEN / "appendix.json").write_text(
        json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    check("appendix.json", report)


def x3_table():
    report = cli._cmd_x3_verify(SimpleNamespace())
    write_golden("x3_table5.json", report)
    check("x3_table5.json", report)


def tate_models():
    notes = {
        "row_10_1": [
            {
                "id": "euler",
                "note": (
                    "catalogue row 10.1 expects fibres A2+E8^2 with Euler "
                    "number 24; the equation published under this label "
                    "computes E6^3+E8^12 with Euler 180. Raising the constant "
                    "36 in the degree-12 denominator of a6 to 136 yields "
                    "E6^3 with Euler 24, which is catalogue row 10.5 (see the "
                    "matching note on that row), so the published constant "
                    "looks like a dropped leading digit on top of a label "
                    "swap. This golden freezes what the published equation "
                    "actually computes."
                ),
            }
        ],
        "row_10_5": [
            {
                "id": "ade",
                "note": (
                    "catalogue row 10.5 expects fibres E6^3; the equation "
                    "published under this label computes A2+E8^2 (Euler 24), "
                    "which is catalogue row 10.1. Together with the row-1 "
                    "equation, which after its one-digit repair computes this "
                    "row's E6^3, the two labels appear swapped in print. This "
                    "golden freezes what the published equation actually "
                    "computes."
                ),
            }
        ],
    }
    for stem in ("row_10_1", "row_10_2", "row_10_3", "row_10_5", "row_10_6"):
        model = MODELS / f"{stem}.json"
        report = cli._cmd_tate(SimpleNamespace(model=str(model)))
        payload = cli._canonical(report.payload)
        payload["model"] = f"{stem}.json"
        doc = {
            "command": ["tate", f"{stem}.json"],
            "payload": payload,
            "findings": notes.get(stem, []),
        }
        (GOLDEN / f"tate_{stem}.json").write_text(
            json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        check(f"tate_{stem}.json", report)


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    print("surface blocks:")
    blocks()
    print("appendix:")
    appendix()
    print("x3:")
    x3_table()
    print("tate models:")
    tate_models()
    print("done:", len(list(GOLDEN.glob("*.json"))), "goldens")


if __name__ == "__main__":
    main()
