import io
import json
import re

import pytest

from sl3ho.cli import run, parse_args, CliError
from sl3ho.poly import parse_tq

SESSION_POINCARE = ("(q^-14 + q^-12 + q^-10) + t^2(q^-16 + q^-14) + "
                    "t^3(q^-22 + q^-20) + t^4(q^-20 + 2q^-18 + q^-16) + "
                    "t^5(q^-26 + 2q^-24 + q^-22) + t^6(q^-22) + "
                    "t^7(q^-28 + q^-26) + t^8(q^-32)")
SESSION_TORSION = ("t^3(q^-18) + t^5(q^-22 + q^-20) + "
                   "t^7(q^-26 + q^-24) + t^8(q^-30 + q^-28)")


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def payload_poly(text, prefix):
    joined = re.sub(r"\n\s+", " ", text)
    for line in joined.splitlines():
        if line.startswith(prefix):
            return parse_tq(line[len(prefix):].strip())
    raise AssertionError(f"no line starting with {prefix!r} in:\n{text}")


def test_help_lists_flags():
    code, out = cli("-h")
    assert code == 0
    for flag in ["-q", "-r", "-g", "-v", "-vv", "-t", "-h"]:
        assert flag in out
    assert "braid" in out and "pd" in out and "dt" in out


def test_torus_session_payload():
    code, out = cli("-t", "braid", "abababab")
    assert code == 0
    assert "Girth: 6." in out
    assert payload_poly(out, "Rational homology:") == parse_tq(SESSION_POINCARE)
    assert "Total rank: 19" in out
    assert "Rational homology is not self-dual => the link is chiral." in out
    assert payload_poly(out, "3-torsion:") == parse_tq(SESSION_TORSION)
    assert ("The 3-torsion part of homology is not self-dual => "
            "the link is chiral.") in out
    assert "s_3-concordance invariant: -12" in out
    assert "Run time in seconds:" in out
    assert "Memory consumption in megabytes:" in out


def test_unknot_outputs():
    code, out = cli("braid", "a")
    assert code == 0
    assert payload_poly(out, "Rational homology:") == \
        parse_tq("(q^-2 + 1 + q^2)")
    assert "Total rank: 3" in out
    assert "Torsion-free integral homology." in out
    assert "s_3-concordance invariant: 0" in out


def test_reduced_figure_eight_self_dual():
    code, out = cli("-r", "braid", "aBaB")
    assert code == 0
    assert "Rational homology is self-dual." in out
    assert "Total rank: 5" in out
    assert "s_3" not in out  # reduced mode skips s3 extraction


def test_rational_mode_skips_torsion():
    code, out = cli("-q", "braid", "aaa")
    assert code == 0
    assert "torsion" not in out.lower()


def test_girth_flag_payload_equal():
    _, out1 = cli("braid", "aBaB")
    _, out2 = cli("-g", "braid", "aBaB")
    key = "Rational homology:"
    assert payload_poly(out1, key) == payload_poly(out2, key)
    for line in ["Total rank: ", "s_3-concordance invariant:"]:
        l1 = [x for x in out1.splitlines() if x.startswith(line)]
        l2 = [x for x in out2.splitlines() if x.startswith(line)]
        assert l1 == l2


def test_tree_flag_payload_equal():
    _, out1 = cli("braid", "aaa")
    _, out2 = cli("--tree", "braid", "aaa")
    key = "Rational homology:"
    assert payload_poly(out1, key) == payload_poly(out2, key)


def test_pd_and_dt_inputs():
    code, out = cli("pd", "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]")
    assert code == 0
    assert "Total rank: 11" in out
    code, out = cli("dt", "[4,6,8,2]")
    assert code == 0
    assert "Total rank: 11" in out


def test_json_output():
    code, out = cli("--json", "braid", "aaa")
    assert code == 0
    data = json.loads(out)
    assert data["total_rank"] == 7
    assert data["girth"] == 4
    assert data["s3"]["raw"] == -4
    assert data["s3"]["normalized"] == 2
    assert [3, -10, 3] in data["homology"]["torsion"]


def test_exit_codes():
    code, _ = cli("braid", "a1")
    assert code == 2
    code, _ = cli("dt", "[2]")
    assert code == 2
    code, _ = cli("nope", "a")
    assert code == 2
    code, _ = cli("braid")
    assert code == 2
    code, _ = cli("-r9", "braid", "aaa")
    assert code == 3


def test_parse_args_reduced_component():
    cfg = parse_args(["-r2", "braid", "aa"])
    assert cfg["reduced"] == 2
    cfg = parse_args(["-r", "braid", "aa"])
    assert cfg["reduced"] == 0
    cfg = parse_args(["-vv", "-q", "braid", "aa"])
    assert cfg["verbose"] == 2 and cfg["rational"]


def test_deterministic_output():
    _, out1 = cli("braid", "aBaB")
    _, out2 = cli("braid", "aBaB")
    assert out1 == out2
