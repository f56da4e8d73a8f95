import pytest

from teleqkd.cli import main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def value(out, key):
    for line in out.splitlines():
        if line.startswith(key):
            return float(line.split("=")[1].split(";")[0])
    raise KeyError(key)


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--model", "bb84-std", "--eps-x", "0.05", "--eps-z", "0.05")
    assert code == 0 and value(out, "r =") == pytest.approx(0.4272, abs=1e-4)
    code, out, _ = run(capsys, "analyze", "--model", "gr10-mod", "--p", "0.5", "--delta-x", "0")
    assert code == 0 and value(out, "r =") == 1.0 and "verdict: secure" in out


def test_analyze_infeasible(capsys):
    code, out, err = run(capsys, "analyze", "--model", "bb84-alt", "--eps-x", "0.01", "--eps-z", "0.05")
    assert code == 2 and "lambda_2" in err and out == ""


def test_analyze_numeric(capsys):
    code, out, _ = run(capsys, "analyze", "--model", "gr10", "--eps-x", "0.08", "--numeric")
    assert code == 0 and value(out, "r =") == pytest.approx(1 - 2 * 0.40217919 + 0.0, abs=1e-3)


def test_insecure_is_success(capsys):
    code, out, _ = run(capsys, "analyze", "--model", "gr10", "--eps-x", "0.2")
    assert code == 0 and "insecure" in out


@pytest.mark.parametrize(
    "args,lo,hi",
    [
        (("--model", "bb84-std", "--symmetric"), 0.110028 - 1e-6, 0.110028 + 1e-6),
        (("--model", "bb84-alt", "--symmetric"), 0.12609, 0.12629),
        (("--model", "gr10-mod", "--beta", "0.8", "--p", "0.49", "--in", "delta-x"), 0.07, 0.08),
    ],
)
def test_threshold(capsys, args, lo, hi):
    code, out, _ = run(capsys, "threshold", *args)
    assert code == 0 and lo <= value(out, "threshold") <= hi


def test_no_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--model", "gr10-mod", "--p", "0.3", "--in", "delta-x")
    assert code == 0 and out.startswith("no threshold")


def test_curve(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _, _ = run(capsys, "curve", "--model", "gr10", "--from", "0", "--to", "0.25", "--steps", "26", "--output", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0] == "x,r" and len(lines) == 27
    xs = [float(l.split(",")[0]) for l in lines[1:]]
    assert all(b > a for a, b in zip(xs, xs[1:]))
    assert float(lines[1].split(",")[1]) == 1.0


def test_curve_uses_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TELEQKD_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "curve", "--model", "gr10-mod", "--steps", "5", "--p", "0.46,0.5")
    lines = (tmp_path / "curve_gr10-mod.csv").read_text().splitlines()
    assert code == 0 and lines[0] == "x,r,p,beta" and len(lines) == 11


def test_curve_invalid_writes_nothing(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _, _ = run(capsys, "curve", "--model", "gr10", "--steps", "1", "--output", str(path))
    assert code == 2 and not path.exists()
    code, _, _ = run(capsys, "curve", "--model", "gr10-mod", "--p", "0.2", "--output", str(path))
    assert code == 2 and not path.exists()


def test_simulate_deterministic(capsys, tmp_path):
    outs = []
    for tag in "ab":
        args = ["simulate", "--protocol", "bb84", "--attack", "depolarizing:0.05", "--rounds", "20000", "--seed", "9",
                "--transcript", str(tmp_path / f"{tag}.txt"), "--summary", str(tmp_path / f"{tag}.csv")]  # fmt: skip
        assert run(capsys, *args)[0] == 0
        outs.append(((tmp_path / f"{tag}.txt").read_bytes(), (tmp_path / f"{tag}.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_simulate_gr10_ideal(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--protocol", "gr10", "--rounds", "5000", "--seed", "1",
                       "--transcript", str(tmp_path / "t.txt"), "--summary", str(tmp_path / "s.csv"))  # fmt: skip
    assert code == 0 and value(out, "eps_x") == 0.0 and value(out, "r (gr10)") == 1.0
    header, row = (tmp_path / "s.csv").read_text().splitlines()
    fields = dict(zip(header.split(","), row.split(",")))
    assert fields["r"] == "1" and fields["secure"] == "1"


def test_simulate_out_of_domain_is_insecure(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--protocol", "bb84", "--model", "bb84-alt", "--rounds", "4000",
                       "--attack", "intercept-resend:x", "--transcript", str(tmp_path / "t.txt"),
                       "--summary", str(tmp_path / "s.csv"))  # fmt: skip
    assert code == 0 and "r unavailable" in out and "insecure" in out


def test_simulate_invalid(capsys, tmp_path):
    t = tmp_path / "t.txt"
    for args in (("--protocol", "gr10", "--n1", "0", "--n2", "0"), ("--protocol", "bb84", "--attack", "depolarizing:0.9"),
                 ("--protocol", "gr10", "--model", "bb84-std"), ("--rounds", "10",)):  # fmt: skip
        code, _, err = run(capsys, "simulate", *args, "--transcript", str(t))
        assert code == 2 and err.startswith("error") and not t.exists()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nmodel = bb84-std\neps_x = 0.05  # inline\neps-z = 0.05\n")
    code, out, _ = run(capsys, "analyze", "--config", str(cfg))
    assert code == 0 and value(out, "r =") == pytest.approx(0.4272, abs=1e-4)
    code, out, _ = run(capsys, "analyze", "--config", str(cfg), "--eps-z", "0")
    assert value(out, "r =") == pytest.approx(1 - 0.28639695711595625, abs=1e-9)
    cfg.write_text("model = gr10-mod\nnumeric = yes\np = 0.5\ndelta-x = 0\n")
    assert run(capsys, "analyze", "--config", str(cfg))[0] == 0


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    for text in ("colour = red\n", "model bb84-std\n", "model = bb84-x\n", "eps_x = abc\n", "config = other\n"):
        cfg.write_text(text)
        assert run(capsys, "analyze", "--config", str(cfg))[0] == 2
    assert run(capsys, "analyze", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "analyze", "--eps-x", "0.1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "analyze", "--model", "gr10", "--eps-x", "nan")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "teleport", "--trials", "500", "--seed", "7")
    assert code == 0 and "FAIL" not in out and out.count("PASS") == 2


def test_verify_reports_perturbation(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "keyrate", "--grid", "3", "--perturb-lambda", "0.01")
    assert code == 1 and "FAIL keyrate" in out


def test_config_overrides_defaults(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("protocol = gr10-modified\nrounds = 2000\nn1 = 1\nn2 = 0.5\nseed = 11\n")
    t = tmp_path / "t.txt"
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--transcript", str(t), "--summary", str(tmp_path / "s.csv"))
    assert code == 0 and "rounds: 2000" in out and "# n2 = 0.5" in t.read_text()
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--rounds", "300", "--transcript", str(t),
                       "--summary", str(tmp_path / "s.csv"))  # fmt: skip
    assert code == 0 and "rounds: 300" in out
