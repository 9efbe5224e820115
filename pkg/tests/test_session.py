from __future__ import annotations

import io
import json

import pytest

from psverify.session.cli import run_cli
from psverify.session.daemon import Server, serve
from psverify.session.pipeline import Options, SolverVerdict
from psverify.session.report import dumps_report, json_report

from conftest import DATA, FIXTURES, analyze
from rpc import DaemonProcess


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("path, code", [
    (DATA / "size.psc", 0), (DATA / "sums.psc", 0), (DATA / "sums_stripped.psc", 1),
    (FIXTURES / "bad_syntax.psc", 2), (FIXTURES / "positivity.psc", 2), (FIXTURES / "term.psc", 0),
])
def test_exit_codes(path, code):
    assert cli("verify", str(path))[0] == code


def test_usage_errors_exit_two(tmp_path):
    assert cli("verify")[0] == 2
    assert cli("verify", str(DATA / "size.psc"), "--bogus")[0] == 2
    assert cli("verify", str(tmp_path / "missing.psc"))[0] == 2


def test_table_and_dumps():
    code, out, _ = cli("verify", str(DATA / "size.psc"), "--dump-depgraph", "--dump-equations",
                       "--dump-termination", "--dump-vcs")
    assert code == 0
    assert "size_0 Nil_0 = 0" in out and "certified, measure [size_0:0]" in out
    assert "size_0.postcondition.0 [postcondition]" in out
    assert out.rstrip().endswith("overall: unsat (1/1 proved)")


def test_outputs_are_written(tmp_path):
    thy, rep = tmp_path / "o.thy.txt", tmp_path / "o.json"
    cli("verify", str(FIXTURES / "mapping.psc"), "--assume-mappings", "--emit-theory", str(thy),
        "--json-report", str(rep))
    report = json.loads(rep.read_text())
    assert report["axioms"] == ["map_1 = map_0"]
    assert report["overall"] == "unsat"
    assert "axiomatization" in thy.read_text()


def test_prove_mode_reports_no_axioms():
    an = analyze((FIXTURES / "mapping.psc").read_text())
    report = json_report(an, "")
    assert report["axioms"] == []
    assert {"id": "map_1.mapping.0", "kind": "mapping", "verdict": "proved", "millis": None} in report["vcs"]


def test_reports_are_byte_stable():
    src = (DATA / "sums_stripped.psc").read_text()
    a = dumps_report(json_report(analyze(src), src))
    b = dumps_report(json_report(analyze(src), src))
    assert a == b


def test_timings_are_opt_in():
    src = (DATA / "size.psc").read_text()
    report = json_report(analyze(src, timings=True), src, timings=True)
    assert report["vcs"][0]["millis"] is not None


def test_verdicts_never_say_sat():
    with pytest.raises(ValueError):
        SolverVerdict("sat", {}, [], {})


def run_server(lines, workers=2):
    out = io.StringIO()
    serve(io.StringIO("\n".join(lines) + "\n"), out, Options(), workers)
    return [json.loads(x) for x in out.getvalue().splitlines()]


def req(rid, method, **params):
    return json.dumps({"id": rid, "method": method, "params": params})


def test_in_process_session():
    src = (DATA / "size.psc").read_text()
    resps = run_server([req(1, "load", source=src), req(2, "status"), "not json", req(1, "status"),
                        req(3, "nope"), json.dumps({"id": 4}), req(5, "verify", program_id="p9")])
    by = {r["id"]: r for r in resps if r["id"] is not None}
    assert by[1]["result"]["program_id"] == "p1"
    assert by[2]["result"]["state"] in ("idle", "busy")
    assert by[3]["error"]["code"] == "method-not-found"
    assert by[4]["error"]["code"] == "parse-error"
    assert by[5]["error"]["code"] == "invalid-params"
    codes = [r["error"]["code"] for r in resps if "error" in r]
    assert codes.count("duplicate-id") == 1
    assert [r for r in resps if r["id"] is None][0]["error"]["code"] == "parse-error"


def test_load_diagnostics():
    resps = run_server([req(1, "load", source="def f(x: BigInt): BigInt = y", file="x.psc")])
    res = resps[0]["result"]
    assert res["program_id"] is None
    (d,) = res["diagnostics"]
    assert (d["file"], d["line"]) == ("x.psc", 1) and "unresolved" in d["message"]


def test_daemon_process_round_trip():
    d = DaemonProcess()
    try:
        pid = d.call(1, "load", source=(DATA / "sums.psc").read_text())["result"]["program_id"]
        d.send(2, "verify", program_id=pid)
        d.send(3, "verify", program_id=pid, vc_ids=["sumReverse_0.holds.0"])
        r2, r3 = d.wait_for(2), d.wait_for(3)
        assert r2["result"]["overall"] == "unsat"
        assert list(r3["result"]["per_vc"]) == ["sumReverse_0.holds.0"]
        text = d.call(4, "emit_theory", program_id=pid)["result"]["text"]
        assert text.startswith("theory Program")
        assert d.call(5, "cancel", id=99)["result"] == {"cancelled": False}
        assert d.call(6, "shutdown")["result"] == {}
    finally:
        assert d.close() == 0


def test_cancel_reaches_a_running_verify():
    slow = "\n".join(f"def l{i}(a: Nat, b: Nat): Boolean = (plus(plus(a, b), Zero) == plus(b, a)).holds"
                     for i in range(40))
    out = io.StringIO()
    server = Server(out, Options(), workers=1)
    server.handle_line(req(1, "load", source=slow))
    server.handle_line(req(2, "verify", program_id="p1"))
    server.handle_line(req(3, "cancel", id=2))
    server.close(cancel_pending=False)
    by = {r["id"]: r for r in map(json.loads, out.getvalue().splitlines())}
    assert set(by) == {1, 2, 3}
    assert by[3]["result"] == {"cancelled": True}
    assert by[2]["error"]["code"] == "cancelled"
