import pytest

from sbmfit.cli import main


PARAMS_TEXT = "k = 2\npi = 0.5, 0.5\nS = 9.0, 1.0\nS = 1.0, 9.0\nrho_mode = log_n_over_n\n"


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "params.txt"
    path.write_text(PARAMS_TEXT)
    return str(path)


def test_sample_fit_eval_round_trip(tmp_path, params_file, capsys):
    g_path = str(tmp_path / "g.txt")
    z_path = str(tmp_path / "z.txt")
    e_path = str(tmp_path / "e.txt")
    assert main(["sample", "--params", params_file, "--n", "80", "--seed", "4",
                 "--out-graph", g_path, "--out-labels", z_path]) == 0
    assert main(["fit", g_path, "--objective", "icl", "--k", "2", "--alpha", "0.05",
                 "--restarts", "8", "--seed", "2", "--out", e_path]) == 0
    assert main(["eval", "--true", z_path, "--pred", e_path]) == 0
    out = capsys.readouterr().out
    assert "nmi" in out and "misclassified" in out


def test_fit_exact_guard_exit_code(tmp_path, params_file):
    g_path = str(tmp_path / "g.txt")
    z_path = str(tmp_path / "z.txt")
    main(["sample", "--params", params_file, "--n", "60", "--seed", "1",
          "--out-graph", g_path, "--out-labels", z_path])
    rc = main(["fit", g_path, "--k", "2", "--exact", "--out", str(tmp_path / "e.txt")])
    assert rc == 2


def test_constant_output(params_file, capsys):
    assert main(["constant", "--params", params_file]) == 0
    out = capsys.readouterr().out
    assert "constant 2" in out
    assert "argmin_pair 0 1" in out
    assert "ml_exact_recovery_at_log_n_over_n yes" in out
    assert "icl_exact_recovery_at_log_n_over_n no" in out


def test_verify_exit_zero(tmp_path, capsys):
    out_path = str(tmp_path / "report.txt")
    assert main(["verify", "--seed", "1", "--out", out_path]) == 0
    assert "checks passed" in capsys.readouterr().out
    assert "PASS" in open(out_path).read()


def test_sweep_deterministic_csv(tmp_path, capsys):
    args = ["sweep-separation", "--n", "40", "--k", "2", "--seps", "0,3", "--reps", "2",
            "--restarts", "3", "--seed", "11"]
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert main(args + ["--out", a, "--summary", str(tmp_path / "sa.csv"),
                            "--plot", str(tmp_path / "pa.svg")]) == 0
        assert main(args + ["--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    assert open(str(tmp_path / "pa.svg")).read().startswith("<svg")


def test_sweep_sparsity_cli(tmp_path):
    out = str(tmp_path / "rows.csv")
    assert main(["sweep-sparsity", "--n", "40", "--k", "2", "--rhos", "0.025,0.1",
                 "--reps", "1", "--restarts", "2", "--seed", "3", "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert len(lines) == 1 + 2 * 1 * 2


def test_concentration_cli(capsys):
    assert main(["concentration", "--n-list", "50,100", "--reps", "20",
                 "--delta", "4", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "violation_fraction" in out
    assert "w_self_max=0" in out


def test_config_file_defaults(tmp_path, params_file):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("n = 40\nreps = 1\nrestarts = 2\nseps = 0,2\n")
    out = str(tmp_path / "rows.csv")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rc = main(["--config", str(cfg), "sweep-separation", "--k", "2",
                   "--seed", "1", "--out", out])
    assert rc == 0
    lines = open(out).read().splitlines()
    assert len(lines) == 1 + 2 * 1 * 2


def test_usage_error_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--k", "2"])  # missing positional graph and --out
    assert exc.value.code == 2


def test_missing_file_is_usage_error(tmp_path):
    rc = main(["constant", "--params", str(tmp_path / "nope.txt")])
    assert rc == 2


def test_fit_headerless_edge_list(tmp_path):
    g_path = tmp_path / "bare.txt"
    g_path.write_text("2 1\n3 4\n5 6\n7 8\n")
    rc = main(["fit", str(g_path), "--no-header", "--k", "2", "--alpha", "0.2",
               "--restarts", "3", "--out", str(tmp_path / "e.txt")])
    assert rc == 0
    assert len(open(tmp_path / "e.txt").read().split()) == 8
