import math

import numpy as np
import pytest

from philyap.cli import main
from philyap.gallery import random_symmetric
from philyap.matio import parse_matrix, write_matrix
from philyap.params import kernel_cost, ps_cost


def test_phi_zero_gallery_is_q_over_factorial(capsys):
    assert main(["phi", "--gallery", "zero", "--n", "8", "--l", "3", "--seed", "7"]) == 0
    out = capsys.readouterr()
    X = parse_matrix(out.out)
    assert np.allclose(X, random_symmetric(8, 7) / 6, rtol=0, atol=1e-16)
    assert "m=" in out.err and "products=" in out.err


def test_phi_laplacian_product_count(capsys):
    args = ["phi", "--gallery", "laplacian1d", "--n", "100", "--scale", "2500", "--l", "1",
            "--seed", "1"]
    assert main(args) == 0
    err = capsys.readouterr().err
    fields = dict(kv.split("=") for kv in err.split())
    m, s, l = int(fields["m"]), int(fields["s"]), 1
    assert int(fields["products"]) == ps_cost(m + l) + m + l + 1 + (s - 1) * (2 * l + 1)
    assert int(fields["products"]) == kernel_cost(m, l, s)


def test_malformed_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "a.txt"
    bad.write_text("2 2\n1 2\n3 oops\n")
    assert main(["phi", "--matrix", str(bad), "--l", "1"]) == 2
    assert "line 3" in capsys.readouterr().err


def test_phi_with_files_and_time(tmp_path):
    A = np.array([[-1.0, 0.5], [0.0, -2.0]])
    Q = np.eye(2)
    write_matrix(tmp_path / "A.txt", A)
    write_matrix(tmp_path / "Q.txt", Q)
    out = tmp_path / "X.txt"
    assert main(["phi", "--matrix", str(tmp_path / "A.txt"), "--q", str(tmp_path / "Q.txt"),
                 "--l", "1", "--t", "0.5", "--out", str(out)]) == 0
    from philyap.kernel import phi_lyap
    X = parse_matrix(out.read_text())
    assert np.array_equal(X, phi_lyap(0.5 * A, Q, 1).top)


def test_size_mismatch_and_usage_errors(tmp_path):
    write_matrix(tmp_path / "Q.txt", np.eye(3))
    assert main(["phi", "--gallery", "identity", "--n", "4", "--l", "1",
                 "--q", str(tmp_path / "Q.txt")]) == 2
    assert main(["phi", "--gallery", "identity"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["phi", "--matrix", str(tmp_path / "missing.txt"), "--l", "1"]) == 2


def test_numerical_failure_exit_1(capsys):
    assert main(["phi", "--gallery", "identity", "--n", "2", "--l", "1", "--t", "400"]) == 1
    assert "overflow" in capsys.readouterr().err


def test_theta(capsys):
    assert main(["theta", "--degree", "6"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(9.0657e-3, rel=1e-4)


def test_env_seed_and_flag_precedence(monkeypatch, capsys):
    monkeypatch.setenv("PHILYAP_SEED", "11")
    main(["phi", "--gallery", "zero", "--n", "3", "--l", "1"])
    X = parse_matrix(capsys.readouterr().out)
    assert np.allclose(X, random_symmetric(3, 11))
    main(["phi", "--gallery", "zero", "--n", "3", "--l", "1", "--seed", "12"])
    assert "seed=12" in capsys.readouterr().err
    monkeypatch.setenv("PHILYAP_SEED", "abc")
    assert main(["phi", "--gallery", "zero", "--n", "3", "--l", "1"]) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nl = 2\nn = 3\nseed = 5\n")
    assert main(["--config", str(cfg), "phi", "--gallery", "zero"]) == 0
    out = capsys.readouterr()
    assert np.allclose(parse_matrix(out.out), random_symmetric(3, 5) / 2)
    # flags beat the file
    assert main(["--config", str(cfg), "phi", "--gallery", "zero", "--seed", "6"]) == 0
    assert "seed=6" in capsys.readouterr().err
    cfg.write_text("l 2\n")
    assert main(["--config", str(cfg), "phi", "--gallery", "zero"]) == 2
    assert "line 1" in capsys.readouterr().err
    cfg.write_text("bogus = 1\n")
    assert main(["--config", str(cfg), "phi", "--gallery", "zero"]) == 2


def test_bench_command_is_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv("PHILYAP_SEED", "42")
    outs = []
    for k in range(2):
        stem = tmp_path / f"b{k}"
        assert main(["bench", "--n", "4", "--l", "1..3", "--repeats", "1",
                     "--cases", "random_dense,laplacian", "--out", str(stem)]) == 0
        rows = (tmp_path / f"b{k}.csv").read_text().splitlines()
        outs.append([",".join(r.split(",")[:6]) for r in rows])
    assert outs[0] == outs[1]
    assert len(outs[0]) == 7


def test_integrate_command(tmp_path, capsys):
    stem = tmp_path / "ladder"
    assert main(["integrate", "--scheme", "exp_euler", "--n0", "4", "--steps-ladder", "8..32",
                 "--t-end", "0.02", "--ref-steps", "256", "--out", str(stem)]) == 0
    err = capsys.readouterr().err
    slope = float(err.split("slope=")[1].split()[0])
    assert 0.8 < slope < 1.2
    assert (tmp_path / "ladder.json").exists()
    assert main(["integrate", "--n0", "4"]) == 2
