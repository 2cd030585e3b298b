import pytest

from logdisc.cli import main

CHAIN34 = "curve e1 w=3\ncurve e2 w=4\nedge e1 e2\n"


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain34.graph"
    path.write_text(CHAIN34)
    return str(path)


def test_solve_csv(chain_file, capsys):
    code, out, _ = run_cli(["solve", chain_file], capsys)
    assert code == 0
    assert out == "id,a\ne1,5/11\ne2,4/11\nmld,4/11\nindex,11\n"


def test_solve_flag_form(chain_file, capsys):
    code, out, _ = run_cli(["solve", "--graph", chain_file], capsys)
    assert code == 0
    assert "mld,4/11" in out


def test_classify(chain_file, capsys):
    code, out, _ = run_cli(["classify", chain_file], capsys)
    assert code == 0
    assert out == "class=A(2)\n"


def test_mld_and_index(chain_file, capsys):
    assert run_cli(["mld", chain_file], capsys)[1] == "mld=4/11\n"
    assert run_cli(["index", chain_file], capsys)[1] == "index=11\n"


def test_complement_record(capsys):
    code, out, _ = run_cli(["complement", "--b", "", "--delta", "1/3"], capsys)
    assert code == 0
    assert "n=2\n" in out
    assert "padding=1/2,1/2,1/2,1/2\n" in out
    assert "eps=1/2\n" in out
    assert "sum=2\n" in out


def test_complement_csv_format(capsys):
    code, out, _ = run_cli(
        ["complement", "--b", "2/3", "--delta", "1/3", "--format", "csv"], capsys
    )
    assert code == 0
    assert out.startswith("key,value\n")
    assert "n,3\n" in out


def test_dtau_modes(capsys):
    code, out, _ = run_cli(
        ["dtau", "--b", "16/25,1/2", "--tau", "1/20"], capsys
    )
    assert code == 0
    assert out == "result=2/3,1/2\n"
    code, out, _ = run_cli(
        [
            "dtau",
            "--b",
            "16/25",
            "--tau",
            "1/5",
            "--mode",
            "biggest-a",
            "--targets",
            "1/2,2/3",
        ],
        capsys,
    )
    assert code == 0
    assert out == "result=2/3\n"


def test_subboundary(chain_file, capsys):
    code, out, _ = run_cli(["subboundary", chain_file, "--delta", "4/11"], capsys)
    assert code == 0
    assert "u=5/12,1/4\n" in out
    assert "path=structured\n" in out


def test_tower_trace(chain_file, tmp_path, capsys):
    script = tmp_path / "moves.tower"
    script.write_text("up-between e1 e2 a=9/11\ndown u1\n")
    code, out, _ = run_cli(["tower", chain_file, "--script", str(script)], capsys)
    assert code == 0
    assert out.startswith("step,move,curve,negativity\n")
    assert "1,up-between e1 e2 a=9/11,u1,0\n" in out


def test_atlas(capsys):
    code, out, _ = run_cli(["atlas", "--p-max", "2"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "family,p,contractible,mld,index"


def test_verify_quick_exit_zero(capsys):
    code, out, _ = run_cli(["verify", "--suite", "quick"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "property,instances,failures"
    assert all(line.endswith(",0") for line in out.splitlines()[1:])


def test_verify_single_property(capsys):
    code, out, _ = run_cli(
        ["verify", "--properties", "closed-form-family", "--max-r", "4"], capsys
    )
    assert code == 0
    assert "closed-form-family" in out


def test_usage_error_exit_one(tmp_path, capsys):
    code, _, err = run_cli(["solve", str(tmp_path / "missing.graph")], capsys)
    assert code == 1
    assert err.startswith("error: usage:")


def test_bad_flag_exit_one(capsys):
    assert run_cli(["solve", "--no-such-flag"], capsys)[0] == 1


def test_precondition_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.graph"
    path.write_text("curve a w=1\ncurve b w=1\nedge a b\n")
    code, _, err = run_cli(["solve", str(path)], capsys)
    assert code == 2
    assert err.startswith("error: precondition:")


def test_out_flag_writes_file(chain_file, tmp_path, capsys):
    target = tmp_path / "profile.csv"
    code, out, _ = run_cli(["solve", chain_file, "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("id,a\n")


def test_byte_determinism(chain_file, capsys):
    _, first, _ = run_cli(["solve", chain_file], capsys)
    _, second, _ = run_cli(["solve", chain_file], capsys)
    assert first == second
    _, c1, _ = run_cli(["complement", "--b", "5/12,1/6", "--delta", "1/4"], capsys)
    _, c2, _ = run_cli(["complement", "--b", "5/12,1/6", "--delta", "1/4"], capsys)
    assert c1 == c2


def test_cli_over_http(chain_file, capsys, monkeypatch):
    # drive the HTTP path through the app without a live server
    import httpx
    from fastapi.testclient import TestClient

    from logdisc import service

    client = TestClient(service.app)

    def app_post(url, json=None, timeout=None):
        return client.post(url.replace("http://svc", ""), json=json)

    monkeypatch.setattr(httpx, "post", app_post)
    code, out, _ = run_cli(["solve", chain_file, "--server", "http://svc"], capsys)
    assert code == 0
    assert out == "id,a\ne1,5/11\ne2,4/11\nmld,4/11\nindex,11\n"
    path_bad = chain_file.replace("chain34.graph", "bad.graph")
    with open(path_bad, "w") as fh:
        fh.write("curve a w=1\ncurve b w=1\nedge a b\n")
    code, _, err = run_cli(["solve", path_bad, "--server", "http://svc"], capsys)
    assert code == 2
    assert err.startswith("error: precondition:")
