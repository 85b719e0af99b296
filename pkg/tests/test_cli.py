"""The command-line front end: pinned example outputs, JSON round trips,
exit codes, and byte-identical determinism."""

import json

import pytest

from ficat.catcore import FiCategory
from ficat.cli import main, mor_from_json, mor_to_json
from ficat.rings import make_ring
from ficat.si import make_osi_category, make_si_category
from ficat.vic import make_ovic_category, make_vic_category


def run_cli(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


# ---------------------------------------------------------------------------
# pinned examples
# ---------------------------------------------------------------------------

def test_factor_example(capsys):
    rc, out = run_cli(capsys, "factor", "--ring", "Z/4", "--matrix", "[[2,3]]")
    assert rc == 0
    assert out == '{"f1": [[2, 1]], "f2": [[3]]}\n'


def test_hom_enum_count_example(capsys):
    rc, out = run_cli(capsys, "hom-enum", "--cat", "VIC", "--ring", "Z/2",
                      "--src", "1", "--dst", "2", "--count-only")
    assert rc == 0
    assert out == '{"count": 6}\n'


def test_homology_example(capsys):
    rc, out = run_cli(capsys, "homology", "--cat", "FI", "--module", "P0",
                      "--variant", "triple", "--rank", "3")
    assert rc == 0
    assert json.loads(out) == {"H0": 0, "H1": 0, "H2": 0}


# ---------------------------------------------------------------------------
# morphism serialization
# ---------------------------------------------------------------------------

def test_morphism_json_roundtrip_every_category():
    r2 = make_ring("Z/2")
    cats = [
        FiCategory(),
        make_vic_category(r2),
        make_ovic_category(r2),
        make_si_category(r2),
        make_osi_category(r2),
    ]
    for cat in cats:
        for mor in cat.hom(1, 2):
            env = mor_to_json(cat, mor)
            assert env["cat"] == cat.describe()
            assert env["src"] == 1 and env["dst"] == 2
            back = mor_from_json(cat, json.loads(json.dumps(env)), "--x")
            assert back == mor


def test_hom_enum_lines_parse_and_count(capsys):
    rc, out = run_cli(capsys, "hom-enum", "--cat", "OSI", "--ring", "Z/2",
                      "--src", "1", "--dst", "2")
    assert rc == 0
    lines = out.splitlines()
    assert len(lines) == 20
    cat = make_osi_category(make_ring("Z/2"))
    for line in lines:
        env = json.loads(line)
        assert mor_from_json(cat, env, "--x") is not None


def test_compose_cli(capsys):
    rc, out = run_cli(capsys, "compose", "--cat", "FI",
                      "--f", '{"src": 1, "dst": 2, "payload": {"images": [1]}}',
                      "--g", '{"src": 2, "dst": 3, "payload": {"images": [0, 2]}}')
    assert rc == 0
    env = json.loads(out)
    assert env["payload"]["images"] == [2]
    assert env["src"] == 1 and env["dst"] == 3


# ---------------------------------------------------------------------------
# orders through the CLI
# ---------------------------------------------------------------------------

def test_order_cmp_total_and_preceq(capsys):
    rc, out = run_cli(capsys, "order-cmp", "--cat", "OVIC", "--ring", "Z/2",
                      "--lhs", '{"f": [[1], [0]], "fp": [[1, 0]]}',
                      "--rhs", '{"f": [[0], [1]], "fp": [[0, 1]]}')
    assert rc == 0
    rec = json.loads(out)
    assert rec["relation"] == "total"
    assert rec["result"] == "Less"
    rc, out = run_cli(capsys, "order-cmp", "--cat", "OVIC", "--ring", "Z/2",
                      "--relation", "preceq",
                      "--lhs", '{"f": [[0], [1]], "fp": [[0, 1]]}',
                      "--rhs", '{"f": [[0], [0], [1]], "fp": [[0, 0, 1]]}')
    assert rc == 0
    assert json.loads(out)["result"] is True


def test_order_phi_realizes_and_rejects(capsys):
    rc, out = run_cli(capsys, "order-phi", "--cat", "OVIC", "--ring", "Z/2",
                      "--lhs", '{"f": [[0], [1]], "fp": [[0, 1]]}',
                      "--rhs", '{"f": [[0], [0], [1]], "fp": [[0, 0, 1]]}')
    assert rc == 0
    cat = make_ovic_category(make_ring("Z/2"))
    phi = mor_from_json(cat, json.loads(out), "--x")
    lhs = mor_from_json(cat, {"f": [[0], [1]], "fp": [[0, 1]]}, "--lhs")
    rhs = mor_from_json(cat, {"f": [[0], [0], [1]], "fp": [[0, 0, 1]]}, "--rhs")
    assert cat.compose(phi, lhs) == rhs
    # unrelated morphisms give a precondition error
    rc, out = run_cli(capsys, "order-phi", "--cat", "OVIC", "--ring", "Z/2",
                      "--lhs", '{"f": [[1]], "fp": [[1]]}',
                      "--rhs", '{"f": [[0], [1]], "fp": [[0, 1]]}')
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"


def test_order_cmp_osi_defaults_to_standard_forms(capsys):
    rc, out = run_cli(capsys, "order-cmp", "--cat", "OSI", "--ring", "Z/2",
                      "--relation", "preceq",
                      "--lhs", '{"f": [[1, 0], [0, 1]]}',
                      "--rhs", '{"f": [[0, 0], [0, 0], [1, 0], [0, 1]]}')
    assert rc == 0
    assert json.loads(out)["result"] is True


def test_order_cmp_rejects_unordered_categories(capsys):
    rc, out = run_cli(capsys, "order-cmp", "--cat", "FI",
                      "--lhs", '{"src": 1, "dst": 1, "payload": {"images": [0]}}',
                      "--rhs", '{"src": 1, "dst": 1, "payload": {"images": [0]}}')
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"


# ---------------------------------------------------------------------------
# the remaining subcommands
# ---------------------------------------------------------------------------

def test_ring_info(capsys):
    rc, out = run_cli(capsys, "ring-info", "--ring", "Z/6")
    assert rc == 0
    rec = json.loads(out)
    assert rec["spec"] == "Z/6"
    assert rec["size"] == 6
    assert rec["factors"] == ["Z/2", "Z/3"]
    assert rec["is_local"] is False
    assert rec["units"] == [1, 5]


def test_counts_identity_record(capsys):
    rc, out = run_cli(capsys, "counts", "--cat", "SI", "--ring", "Z/2",
                      "--src", "1", "--dst", "2")
    assert rc == 0
    rec = json.loads(out)
    assert rec["hom"] == 120
    assert rec["aut_dst"] == 720
    assert rec["aut_complement"] == 6
    assert rec["identity_holds"] is True


def test_module_dims(capsys):
    rc, out = run_cli(capsys, "module-dims", "--cat", "VIC", "--ring", "Z/2",
                      "--module", "P1", "--max-rank", "3", "--field", "F2")
    assert rc == 0
    rec = json.loads(out)
    assert rec["dims"] == {"0": 0, "1": 1, "2": 6, "3": 28}
    assert rec["field"] == "F2"


def test_axioms_cli(capsys):
    rc, out = run_cli(capsys, "axioms", "--cat", "OVIC", "--ring", "Z/2", "--max-rank", "2")
    assert rc == 0
    rec = json.loads(out)
    assert rec["ok"] is True
    assert rec["category"] == "OVIC(Z/2)"


# ---------------------------------------------------------------------------
# exit codes and error records
# ---------------------------------------------------------------------------

def test_exit_code_precondition(capsys):
    rc, out = run_cli(capsys, "factor", "--ring", "Z/4", "--matrix", "[[2,2]]")
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"


def test_exit_code_budget(capsys, monkeypatch):
    monkeypatch.setenv("FICAT_BUDGET", "2")
    # a ring no other test touches, so the hom cache is cold
    rc, out = run_cli(capsys, "hom-enum", "--cat", "VIC", "--ring", "Z/5",
                      "--src", "1", "--dst", "2")
    assert rc == 2
    assert json.loads(out)["error"] == "budget"


def test_bad_flags_are_precondition_errors(capsys):
    rc, out = run_cli(capsys, "checks", "--profile", "bogus")
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"
    rc, out = run_cli(capsys, "no-such-command")
    assert rc == 1
    rc, out = run_cli(capsys, "hom-enum", "--cat", "FI", "--src", "1")
    assert rc == 1
    rc, out = run_cli(capsys, "hom-enum", "--cat", "VIC", "--src", "1", "--dst", "2")
    assert rc == 1
    rc, out = run_cli(capsys, "homology", "--cat", "FI", "--module", "Q7", "--rank", "1")
    assert rc == 1
    rc, out = run_cli(capsys, "factor", "--ring", "Z/4", "--matrix", "not json")
    assert rc == 1


def test_invalid_morphism_payloads(capsys):
    # fp is not a left inverse of f
    rc, out = run_cli(capsys, "order-cmp", "--cat", "OVIC", "--ring", "Z/2",
                      "--lhs", '{"f": [[1], [1]], "fp": [[0, 0]]}',
                      "--rhs", '{"f": [[0], [1]], "fp": [[0, 1]]}')
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"
    # missing fp field
    rc, out = run_cli(capsys, "compose", "--cat", "VIC", "--ring", "Z/2",
                      "--f", '{"f": [[1], [0]], "fp": [[1, 0]]}',
                      "--g", '{"f": [[1]]}')
    assert rc == 1
    assert json.loads(out)["error"] == "precondition"
    # category missing its ring
    rc, out = run_cli(capsys, "compose", "--cat", "VIC",
                      "--f", '{"f": [[1]], "fp": [[1]]}',
                      "--g", '{"f": [[1]], "fp": [[1]]}')
    assert rc == 1


# ---------------------------------------------------------------------------
# output formats
# ---------------------------------------------------------------------------

def test_pretty_output(capsys):
    rc, out = run_cli(capsys, "counts", "--pretty", "--cat", "FI", "--src", "2", "--dst", "3")
    assert rc == 0
    assert "hom" in out and "6" in out
    assert not out.lstrip().startswith("{")


def test_byte_identical_reruns(capsys):
    args = ("hom-enum", "--cat", "OVIC", "--ring", "Z/4", "--src", "1", "--dst", "2")
    rc1, out1 = run_cli(capsys, *args)
    rc2, out2 = run_cli(capsys, *args)
    assert rc1 == rc2 == 0
    assert out1 == out2
    assert len(out1.splitlines()) == 24


def test_checks_quick_profile_summary(capsys):
    rc, out = run_cli(capsys, "checks", "--profile", "quick")
    assert rc == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 11
    assert [rec["criterion"] for rec in lines[:-1]] == list(range(1, 11))
    assert all(rec["pass"] for rec in lines[:-1])
    summary = lines[-1]
    assert summary == {"criteria": 10, "failed": 0, "pass": True, "passed": 10, "profile": "quick"}
