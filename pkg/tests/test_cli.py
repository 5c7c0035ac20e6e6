import json
import shutil

import pytest

from qexplicit.cli import main, resolve_field


@pytest.fixture
def cache_env(tmp_path, monkeypatch, zero_cache):
    d = tmp_path / "cache"
    shutil.copytree(zero_cache.directory, d)
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(d))
    return d


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_resolve_field():
    assert resolve_field(-1).D == -4
    assert resolve_field(-4).D == -4
    assert resolve_field(-3).D == -3
    assert resolve_field(-5).D == -20


def test_field_tables(capsys):
    code, out, _ = run(capsys, "field", "--d", "-1", "--bound", "10")
    assert code == 0
    lines = {ln.split()[0]: ln.split() for ln in out.splitlines()[2:]}
    assert lines["2"][1:4] == ["ramified", "2", "4"]
    assert lines["3"][1] == "inert" and lines["5"][1] == "split"
    code, out, _ = run(capsys, "field", "--d", "-3", "--bound", "5")
    lines = {ln.split()[0]: ln.split() for ln in out.splitlines()[2:]}
    assert lines["3"][1:4] == ["ramified", "3", "3"]
    assert lines["2"][1] == "inert"
    code, out, _ = run(capsys, "field", "--d", "-4")
    assert code == 0 and out.splitlines()[-1].split()[0] == "47"


def test_field_bad_discriminant(capsys):
    assert run(capsys, "field", "--d", "-12")[0] == 2
    assert run(capsys, "field", "--d", "7")[0] == 2


def test_local_examples(capsys):
    code, out, _ = run(capsys, "local", "--d", "-4", "--prime", "3", "--fn", "bump:center=9,radius=0.1")
    assert code == 0
    value = float(out.splitlines()[1].split()[1])
    assert value == pytest.approx(-0.808312, abs=2e-6)
    code, out, _ = run(capsys, "local", "--fn", "bump:center=2,radius=0.5", "--prime", "7", "--d", "-4")
    assert code == 0 and float(out.splitlines()[1].split()[1]) == 0.0


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_local_all_routes(capsys):
    code, out, _ = run(capsys, "local", "--d", "-4", "--place", "complex", "--fn", "bump:center=2,radius=0.5",
                       "--route", "all")
    assert code == 0
    assert out.count(" ok") == 2 and "MISMATCH" not in out


def test_local_usage_errors(capsys):
    assert run(capsys, "local", "--d", "-4", "--fn", "bump:center=2,radius=0.5")[0] == 2
    assert run(capsys, "local", "--d", "-4", "--prime", "4", "--fn", "bump:center=2,radius=0.5")[0] == 2
    assert run(capsys, "local", "--d", "-4", "--prime", "3", "--fn", "gauss:x=1")[0] == 2


def test_zeros_compute_and_export(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(tmp_path / "c"))
    code, out, _ = run(capsys, "zeros", "compute", "--kind", "zeta", "--height", "30")
    assert code == 0
    text = (tmp_path / "c" / "riemann_zeta_1.zeros").read_text()
    assert "# certified=1" in text and len([ln for ln in text.splitlines() if not ln.startswith("#")]) == 3
    assert run(capsys, "zeros", "compute", "--kind", "dirichlet", "--conductor", "4", "--height", "20")[0] == 0
    out_file = tmp_path / "l4.txt"
    assert run(capsys, "zeros", "export", "--kind", "dirichlet", "--conductor", "4", "--file", str(out_file))[0] == 0
    assert out_file.read_text() == (tmp_path / "c" / "dirichlet_4.zeros").read_text()
    # round trip back into a fresh cache
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(tmp_path / "d"))
    assert run(capsys, "zeros", "import", "--file", str(out_file), "--certify")[0] == 0
    assert (tmp_path / "d" / "dirichlet_4.zeros").read_text() == out_file.read_text()


def test_zeros_import_bad_checksum_leaves_cache(capsys, tmp_path, cache_env):
    before = {p.name: p.read_bytes() for p in cache_env.iterdir()}
    src = (cache_env / "riemann_zeta_1.zeros").read_text()
    bad = tmp_path / "x.txt"
    bad.write_text(src.replace("14.1347251417", "14.1347251418"))
    code, _, err = run(capsys, "zeros", "import", "--file", str(bad))
    assert code == 1 and "checksum" in err
    assert {p.name: p.read_bytes() for p in cache_env.iterdir()} == before


def test_zeros_missing_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(tmp_path / "empty"))
    assert run(capsys, "zeros", "export", "--kind", "zeta")[0] == 1
    assert run(capsys, "zeros", "certify", "--kind", "zeta")[0] == 1


def test_verify_pass_and_determinism(capsys, cache_env, tmp_path):
    args = ["verify", "--d", "-4", "--fn", "bump:center=2,radius=0.7", "--height", "120", "--tol", "1e-4"]
    code, out1, _ = run(capsys, *args, "--output", str(tmp_path / "a.json"))
    assert code == 0 and json.loads(out1)["pass"] is True
    code, out2, _ = run(capsys, *args)
    assert out1 == out2 == (tmp_path / "a.json").read_text()


def test_verify_guards(capsys, cache_env):
    assert run(capsys, "verify", "--d", "-4", "--fn", "bump:center=1,radius=0")[0] == 2
    assert run(capsys, "verify", "--d", "-5", "--fn", "bump:center=2,radius=0.7")[0] == 3
    assert run(capsys, "verify", "--d", "-4")[0] == 2
    assert run(capsys, "verify", "--d", "-4", "--fn", "bump:center=2,radius=0.7", "--height", "-1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_verify_missing_and_uncertified(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QEXPLICIT_CACHE_DIR", str(tmp_path / "c"))
    code, _, err = run(capsys, "verify", "--d", "-4", "--fn", "bump:center=2,radius=0.7", "--no-compute")
    assert code == 1 and "hint" in err
    two = tmp_path / "two.txt"
    import hashlib
    body = "14.1347251417\n21.0220396388\n"
    two.write_text("# kind=riemann_zeta\n# conductor=1\n# height=22\n# certified=1\n" + body
                   + f"# sha256={hashlib.sha256(body.encode()).hexdigest()}\n")
    assert run(capsys, "zeros", "import", "--file", str(two))[0] == 0
    code, _, err = run(capsys, "verify", "--d", "-4", "--fn", "bump:center=2,radius=0.7", "--height", "20")
    assert code == 1 and "not certified" in err and "hint" in err


def test_config_file_flags_win(capsys, cache_env, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('d = -3\nfn = "bump:center=2,radius=0.6"\nheight = 120\ntol = 1e-4\n')
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 0 and json.loads(out)["field"]["D"] == -3
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--d", "-4")
    assert code == 0 and json.loads(out)["field"]["D"] == -4
    nested = tmp_path / "bad.toml"
    nested.write_text("[run]\nd = -3\n")
    assert run(capsys, "verify", "--config", str(nested))[0] == 2
