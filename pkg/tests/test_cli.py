import io
import json
import math


from k3mono.cli import parse_number, run
from k3mono.lattice import direct_sum, hyperbolic, twist
from k3mono.pencil import format_cycles, full_swap


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_groups_identify():
    code, out, _ = call("groups", "identify", "--n", "2")
    data = json.loads(out)
    assert code == 0 and data["order"] == 8 and data["name"] == "D8"
    assert data["spectrum"] == {"1": 1, "2": 5, "4": 2}


def test_groups_identify_bad_n():
    assert call("groups", "identify", "--n", "7")[0] == 2


def test_full_aut_from_file(tmp_path):
    h2 = twist(hyperbolic(), 2)
    path = tmp_path / "lat.json"
    path.write_text(json.dumps(direct_sum(h2, h2).to_json()))
    code, out, _ = call("groups", "full-aut", "--lattice", str(path))
    assert code == 0 and json.loads(out)["order"] == 72


def test_malformed_lattice_file(tmp_path):
    path = tmp_path / "lat.json"
    path.write_text('{"gram": [[1, 2], [3, 4]]}')
    assert call("groups", "full-aut", "--lattice", str(path))[0] == 2
    path.write_text("not json")
    assert call("lattice", "disc", "--lattice", str(path))[0] == 2


def test_unknown_subcommand():
    assert call("bogus")[0] == 2


def test_paper_check_mng_section():
    code, out, _ = call("paper-check", "--section", "MnG")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    assert all(line.startswith("PASS") for line in lines)
    assert "D8" in lines[1] and "D12" in lines[2]


def test_paper_check_reports_failure():
    code, out, _ = call("paper-check", "--section", "MnG-relations")
    assert code == 1 and "FAIL" in out


def test_deterministic_output():
    argv = ("paper-check", "--section", "monodromy", "--format", "json", "--seed", "5")
    assert call(*argv)[1] == call(*argv)[1]


def test_modular_commands():
    code, out, _ = call("modular", "data", "--group", "gamma0:8")
    assert code == 0 and json.loads(out)["cusp_widths"] == [8, 2, 1, 1]
    code, out, _ = call("modular", "verify-rn", "--n", "3", "--bound", "10")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = call("modular", "covers", "--n", "4")
    assert code == 0 and json.loads(out)["total_degree"] == 8
    assert call("modular", "data", "--group", "gamma0:x")[0] == 2


def test_k3_commands():
    code, out, _ = call("k3", "sigma-pi", "--a", "0", "--b", "0")
    assert code == 0 and json.loads(out)["sigma"] == 1
    code, out, _ = call("k3", "roots", "--a", "0.3+0.2i", "--b", "0.1")
    assert code == 0 and len(json.loads(out)["roots_minus"]) == 3
    code, out, _ = call("k3", "ramify", "--i", "1", "--j", "4")
    assert code == 0
    targets = [p["target"] for p in json.loads(out)["points"] if p["order"] == 2]
    assert targets == [[12.20703125, 0.0]]
    assert call("k3", "roots", "--a", "x", "--b", "1")[0] == 2


def test_catalog_check_thin():
    code, out, _ = call("k3", "catalog", "--check-thin")
    rows = json.loads(out)
    assert len(rows) == 19 and code == 1
    assert sum(not r["agrees"] for r in rows) == 3
    assert call("k3", "catalog", "--check-thin", "--toric-only")[0] == 0


def test_monodromy_track(tmp_path):
    raw = [[0.1, 0, 0.2, 0, math.cos(2 * math.pi * k / 48), math.sin(2 * math.pi * k / 48)] for k in range(49)]
    raw[-1] = raw[0]
    path = tmp_path / "loops.json"
    path.write_text(json.dumps([{"samples": raw, "label": "d"}]))
    code, out, _ = call("monodromy", "track", "--loops", str(path), "--tol", "1e-9")
    data = json.loads(out)
    assert code == 0 and data["has_swap"] and data["G_order"] == 2 * data["H_order"]


def test_monodromy_bad_loop(tmp_path):
    path = tmp_path / "loops.json"
    path.write_text(json.dumps([{"samples": [[0, 0, 0, 0], [1, 0, 0, 0]], "label": "open"}]))
    assert call("monodromy", "track", "--loops", str(path))[0] == 2


def test_pencil_check(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps([format_cycles(full_swap()), "(F_3 F_4 F_5)"]))
    code, out, _ = call("pencil", "check", "--perm", str(path))
    assert code == 0 and all(r["accepted"] for r in json.loads(out))
    path.write_text(json.dumps("(F_3 F_6)"))
    assert call("pencil", "check", "--perm", str(path))[0] == 1
    path.write_text(json.dumps("(F_3 F_6"))
    assert call("pencil", "check", "--perm", str(path))[0] == 2


def test_parse_number():
    assert parse_number("1/2") == parse_number("0.5")
    assert parse_number("1+2i") == complex(1, 2)
