import json
from importlib import resources

import pytest

from k3fib import cli

MODELS = resources.files("k3fib").joinpath("data", "models")


def run_cli(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *args):
    code, out = run_cli(capsys, *args)
    return code, json.loads(out)


def test_disc_u_u3(capsys):
    code, doc = run_json(capsys, "lattice", "disc", "U+U(3)")
    assert code == 0
    assert doc["status"] == "ok"
    assert doc["payload"] == {"group": [3, 3], "q": ["2/3", "4/3"]}


def test_disc_single_a2(capsys):
    code, doc = run_json(capsys, "lattice", "disc", "A2")
    assert code == 0
    assert doc["payload"]["group"] == [3]
    assert doc["payload"]["q"] in (["2/3"], ["4/3"])


def test_disc_unimodular_is_empty(capsys):
    code, doc = run_json(capsys, "lattice", "disc", "U+E8")
    assert code == 0
    assert doc["payload"] == {"group": [], "q": []}


def test_disc_even_group_falls_back_to_generators(capsys):
    code, doc = run_json(capsys, "lattice", "disc", "D7")
    assert code == 0
    assert doc["payload"]["group"] == [4]
    assert doc["diagnostics"]
    assert "not elementary" in doc["diagnostics"][0]


def test_complement_subcommand(capsys):
    code, doc = run_json(capsys, "lattice", "complement", "E7", "A2^2")
    assert code == 0
    pay = doc["payload"]
    assert pay["roottype"] == "A2"
    assert pay["complement"] == "(-6)+A2"
    assert pay["det"] == 18
    assert pay["rank"] == 3


def test_complement_rejects_sums(capsys):
    code, doc = run_json(capsys, "lattice", "complement", "E7+E8", "A2")
    assert code == 1
    assert doc["status"] == "error"


def test_niemeier_verify_all(capsys):
    code, doc = run_json(capsys, "niemeier", "verify")
    assert code == 0
    assert len(doc["payload"]) == 6
    assert all(checks["ok"] for checks in doc["payload"].values())


def test_niemeier_list(capsys):
    code, doc = run_json(capsys, "niemeier", "list")
    assert code == 0
    assert "E8^3" in doc["payload"]["root_types"]
    assert len(doc["payload"]["root_types"]) == 6


def test_embed_e6_in_e6_4(capsys):
    code, doc = run_json(capsys, "embed", "E6", "E6^4")
    assert code == 0
    assert doc["payload"]["count"] == 1
    assert doc["payload"]["distributions"] == ["E6:E6;E6:0;E6:0;E6:0"]


def test_classify_row_10_5(capsys):
    code, doc = run_json(capsys, "classify", "--row", "10.5")
    assert code == 0
    pay = doc["payload"]
    assert pay["verdict"] == "Both"
    assert pay["witnesses"]["type1"] == ["IV*", "IV*", "IV*"]
    assert pay["witnesses"]["type2"]


def test_classify_row_1_1(capsys):
    code, doc = run_json(capsys, "classify", "--row", "1.1")
    assert code == 0
    assert doc["payload"]["verdict"] == "Type1Only"
    assert doc["payload"]["witnesses"]["type2"] == []


def test_classify_unknown_row_errors(capsys):
    code, doc = run_json(capsys, "classify", "--row", "11.1")
    assert code == 1
    assert doc["status"] == "error"


def test_tate_bundled_model(capsys):
    model = MODELS.joinpath("row_10_6.json")
    code, doc = run_json(capsys, "tate", "--model", str(model))
    assert code == 0
    assert doc["payload"]["ade"] == "A11+D7"
    assert doc["payload"]["euler"] == 24
    kinds = [p["kodaira"] for p in doc["payload"]["places"]]
    assert kinds == ["I12", "I1", "I0", "I3*"]


def test_tate_euler_finding(capsys):
    model = MODELS.joinpath("row_10_1.json")
    code, doc = run_json(capsys, "tate", "--model", str(model))
    assert code == 0
    assert doc["status"] == "finding"
    assert doc["payload"]["euler"] == 180
    assert any(p["v4"] == "oo" for p in doc["payload"]["places"])


def test_tate_missing_file(capsys):
    code, doc = run_json(capsys, "tate", "--model", "no_such_model.json")
    assert code == 1
    assert doc["status"] == "error"


def test_usage_error_exit_code(capsys):
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()
    assert cli.main(["kns", "run", "--surfaces", "3"]) == 2
    capsys.readouterr()


def test_kns_run_json_and_golden(capsys):
    code, doc = run_json(capsys, "kns", "run", "--surface", "3")
    assert code == 0
    pay = doc["payload"]
    assert pay["t0"] == "E6+E8"
    assert [r["row_id"] for r in pay["rows"]] == ["3.1"]
    report = cli.Report(("kns", "run", "3"), "ok", pay)
    diff = cli.golden_diff(cli.golden_path("block_3.json"), report)
    assert diff["clean"] and diff["ok"]


def test_kns_run_markdown_table(capsys):
    code, out = run_cli(capsys, "kns", "run", "--surface", "3", "--format", "md")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("## Surface 3")
    assert "| row | Niemeier |" in lines[2]
    assert any(line.startswith("| 3.1 |") for line in lines)


def test_block8_diff_is_documented_finding(capsys):
    code, doc = run_json(capsys, "kns", "run", "--surface", "8")
    assert code == 0
    report = cli.Report(("kns", "run", "8"), "ok", doc["payload"])
    diff = cli.golden_diff(cli.golden_path("block_8.json"), report)
    assert not diff["clean"]
    assert diff["ok"]
    assert [d["id"] for d in diff["documented"]] == ["rows.8.7.mw.torsion"]
    assert diff["undocumented"] == []


def test_golden_diff_negative_control(tmp_path, capsys):
    code, doc = run_json(capsys, "kns", "run", "--surface", "3")
    golden = json.loads(cli.golden_path("block_3.json").read_text())
    golden["payload"]["rows"][0]["M"]["det"] = 999
    bad = tmp_path / "block_3.json"
    bad.write_text(json.dumps(golden))
    report = cli.Report(("kns", "run", "3"), "ok", doc["payload"])
    diff = cli.golden_diff(bad, report)
    assert not diff["ok"]
    assert [d["id"] for d in diff["undocumented"]] == ["rows.3.1.M.det"]


def test_golden_diff_missing_file(tmp_path):
    report = cli.Report(("x",), "ok", {})
    with pytest.raises(FileNotFoundError):
        cli.golden_diff(tmp_path / "absent.json", report)


def test_x3_verify_matches_golden(capsys):
    code, doc = run_json(capsys, "x3", "verify")
    assert code == 0
    pay = doc["payload"]
    assert pay["k_intersections"] == {
        "1": -6, "2": 0, "3": 0, "4": 0, "5": -6, "6": 0,
    }
    assert pay["sigma5_product"] == 4
    assert pay["types"]["1"] == "Type1" and pay["types"]["2"] == "Type2"
    report = cli.Report(("x3", "verify"), "ok", pay)
    diff = cli.golden_diff(cli.golden_path("x3_table5.json"), report)
    assert diff["clean"]


def test_x3_config_dump(capsys):
    code, doc = run_json(capsys, "x3", "config")
    assert code == 0
    pay = doc["payload"]
    assert len(pay["curves"]) == 25
    assert len(pay["blowup_points"]) == 9
    assert pay["intersections"]["Theta0.Theta1"] == 1


def test_output_is_deterministic(capsys):
    _, first = run_cli(capsys, "x3", "verify")
    _, second = run_cli(capsys, "x3", "verify")
    assert first == second


def test_appendix_report_audit():
    rep = cli.appendix_report()
    assert rep.status == "ok"
    rows = {r["id"]: r for r in rep.payload["rows"]}
    assert len(rows) == 29
    assert all(r["index_identity"] for r in rows.values())
    assert rows["E8/A2"]["roottype"] == "E6"
    assert rows["D7/A2^2"]["roottype"] == "0"
    assert rows["D7/A2^2"]["det"] == 36
    diff = cli.golden_diff(cli.golden_path("appendix.json"), rep)
    assert diff["ok"] and not diff["clean"]
    assert sorted(d["id"] for d in diff["documented"]) == [
        "rows.D10/A2^3.det",
        "rows.D16/A2^5.det",
        "rows.D7/A2^2.det",
    ]


def test_canonical_json_encodings():
    from fractions import Fraction
    import math

    assert cli._canonical(Fraction(2, 3)) == "2/3"
    assert cli._canonical(Fraction(4, 2)) == 2
    assert cli._canonical(math.inf) == "oo"
    assert cli._canonical(-math.inf) == "-oo"
    assert cli._canonical(2 ** 70) == str(2 ** 70)
    assert cli._canonical({"b": (1, 2), "a": {3}}) == {"b": [1, 2], "a": [3]}
