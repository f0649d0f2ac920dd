import json

import pytest
from fastapi.testclient import TestClient

from sl3skein.app import app
from sl3skein.cli import main
from sl3skein.skein_presented import data_path

LOOP = "T1:E2:E1,T2:E1:E2"


def path(name):
    return str(data_path(f"{name}.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_quiver_triangle(capsys):
    code, out, err = run(capsys, "quiver", "--triangulation", path("triangle"))
    rep = json.loads(out)
    assert code == 0
    assert rep["version"] == "sl3skein.report/1"
    assert len(rep["artifacts"]["B2"]) == 7 and len(rep["artifacts"]["Pi"]) == 7
    assert rep["artifacts"]["D"] == [6]
    assert "quiver: ok" in err


def test_quiver_quadrilateral_plus_plus(capsys):
    code, out, _ = run(capsys, "quiver", "--triangulation", path("quadrilateral"), "--signs", "++")
    assert code == 0 and len(json.loads(out)["artifacts"]["B2"]) == 12


def test_quiver_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"marked_points": ["1"]}')
    assert run(capsys, "quiver", "--triangulation", str(bad))[0] == 2
    bad.write_text("not json")
    assert run(capsys, "quiver", "--triangulation", str(bad))[0] == 2
    assert run(capsys, "quiver", "--triangulation", str(tmp_path / "missing"))[0] == 2


def test_output_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert run(capsys, "enumerate", "--seed", path("triangle"), "--out", str(target))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    run(capsys, "enumerate", "--seed", path("triangle"), "--workers", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_enumerate_counts_and_bound(capsys):
    code, out, _ = run(capsys, "enumerate", "--seed", path("quadrilateral"))
    v = json.loads(out)["verdicts"]
    assert code == 0 and (v["clusters"], v["variables"]) == (50, 24)
    code, out, _ = run(capsys, "enumerate", "--seed", path("triangle"))
    v = json.loads(out)["verdicts"]
    assert (v["clusters"], v["variables"]) == (2, 8)
    code, out, _ = run(capsys, "enumerate", "--seed", path("quadrilateral"), "--max", "10")
    assert code == 1 and "bound_exceeded" in json.loads(out)["verdicts"]


def test_mutate_chain(capsys, tmp_path):
    q = tmp_path / "q.json"
    run(capsys, "quiver", "--triangulation", path("quadrilateral"), "--out", str(q))
    m = tmp_path / "m.json"
    assert run(capsys, "mutate", "--seed", str(q), "--word", "8,t[T231]", "--out", str(m))[0] == 0
    back = tmp_path / "back.json"
    assert run(capsys, "mutate", "--seed", str(m), "--word", "t[T231],8", "--out", str(back))[0] == 0
    start = json.loads(q.read_text())["artifacts"]["seed"]
    assert json.loads(back.read_text())["artifacts"]["seed"]["frame"] == start["frame"]
    assert run(capsys, "mutate", "--seed", str(q), "--word", "0")[0] == 2
    assert run(capsys, "mutate", "--seed", str(q), "--word", "99")[0] == 2
    assert run(capsys, "mutate", "--seed", str(q), "--word", "nolabel")[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "triangle")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "verify", "--suite", "grading")
    assert code == 0
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 2


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--triangulation", path("annulus11"), "--loop", LOOP)
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["positive"] and rep["artifacts"]["terms"] == 8
    code, out, _ = run(capsys, "expand", "--triangulation", path("annulus11"),
                       "--loop", LOOP, "--bracelet", "2")
    assert code == 0 and json.loads(out)["verdicts"]["positive"]
    assert run(capsys, "expand", "--triangulation", path("annulus11"), "--loop", "T1:E2:E1")[0] == 2
    assert run(capsys, "expand", "--triangulation", path("annulus11"),
               "--loop", LOOP, "--bangle", "0")[0] == 2


def test_argument_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--loop", LOOP])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--triangulation", "x", "--loop", LOOP, "--bangle", "2", "--bracelet", "2"])
    assert exc.value.code == 2


# -- HTTP front end ------------------------------------------------------------------

@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_http_quiver_matches_cli(client, capsys):
    tri = json.loads(open(path("triangle")).read())
    r = client.post("/quiver", json={"triangulation": tri})
    assert r.status_code == 200
    code, out, _ = run(capsys, "quiver", "--triangulation", path("triangle"))
    assert r.json() == json.loads(out)


def test_http_errors(client):
    assert client.post("/verify", json={"suite": "nope"}).status_code == 422
    assert client.post("/quiver", json={"triangulation": {"x": 1}}).status_code == 422
    assert client.get("/health").json()["status"] == "ok"
    assert "bangle-oracle" in client.get("/suites").json()


def test_http_expand(client):
    tri = json.loads(open(path("annulus11")).read())
    r = client.post("/expand", json={"triangulation": tri, "loop": LOOP, "mode": "bangle", "n": 2})
    assert r.status_code == 200 and r.json()["ok"] and r.json()["artifacts"]["terms"] == 35
