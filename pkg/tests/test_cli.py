import json

import pytest

from qpharm.cli import main
from qpharm.model import builtin_model


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


class TestAnalyze:
    def test_tandem(self, capsys):
        code, out = run(capsys, "analyze", "tandem")
        assert code == 0
        assert "order 6" in out and "pi/theta: 3" in out

    def test_king(self, capsys):
        code, out = run(capsys, "analyze", "king")
        assert code == 0
        assert "order 4" in out and "pi/theta: 2" in out

    def test_infinite(self, capsys):
        code, out = run(capsys, "analyze", "infinite_pi2")
        assert code == 0
        assert "infinite (bound 12)" in out and "pi/theta: 2" in out

    def test_json_deterministic(self, capsys):
        _, out1 = run(capsys, "analyze", "tandem", "--format", "json")
        _, out2 = run(capsys, "analyze", "tandem", "--format", "json")
        assert out1 == out2
        json.loads(out1)

    def test_model_file(self, capsys, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(builtin_model("tandem").to_json())
        code, out = run(capsys, "analyze", str(p))
        assert code == 0 and "order 6" in out


class TestChain:
    def test_rational_tandem(self, capsys):
        code, out = run(capsys, "chain", "tandem", "--pipeline", "rational",
                        "--n", "3", "--k", "1", "--window", "8")
        assert code == 0
        assert "F_1 = (81*x^3)/(-4 + 20*x" in out
        assert "verification: PASS" in out

    def test_pi2_king(self, capsys):
        code, out = run(capsys, "chain", "king", "--pipeline", "pi2", "--n", "2")
        assert code == 0 and "H_2^1" in out

    def test_series(self, capsys):
        code, out = run(capsys, "chain", "tandem", "--pipeline", "series",
                        "--n", "2", "--k", "1", "--order", "8", "--window", "4")
        assert code == 0 and "series to order" in out

    def test_rational_needs_finite_group(self, capsys):
        code, _ = run(capsys, "chain", "infinite_pi2", "--pipeline", "rational")
        assert code == 3


class TestContinuous:
    def test_tandem_chain(self, capsys):
        code, out = run(capsys, "continuous", "tandem", "--n", "4", "--k", "1", "--limits")
        assert code == 0
        assert "L(h_1^1) = ((3)*x + (3)*y)/(x^3*y^3)" in out
        assert "f_1 = (-3) * x^(-5)" in out
        assert "alpha_(1,1) = -27/4" in out

    def test_non_integer_angle_exit_code(self, capsys, tmp_path):
        from qpharm.model import make_model

        m = make_model({
            (1, 1): "1/6", (-1, -1): "1/6", (1, 0): "1/6",
            (-1, 0): "1/6", (0, 1): "1/6", (0, -1): "1/6",
        })
        p = tmp_path / "m.json"
        p.write_text(m.to_json())
        code, _ = run(capsys, "continuous", str(p))
        assert code == 3


class TestCountFitVerify:
    def test_count(self, capsys):
        code, out = run(capsys, "count", "simple", "--nmax", "6")
        assert code == 0 and "q(0,(0,0);n) = 35/2048" in out

    def test_count_csv(self, capsys):
        code, out = run(capsys, "count", "tandem", "--nmax", "3", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "i,j,q"
        assert "0,0,1/27" in out

    def test_fit(self, capsys):
        code, out = run(capsys, "fit", "simple", "--nmax", "200", "--target", "2,1")
        assert code == 0
        val = float(out.split("=")[1].split()[0])
        assert abs(val - 6.0) < 0.1

    def test_verify(self, capsys):
        code, out = run(capsys, "verify", "tandem", "--n", "2", "--window", "8")
        assert code == 0
        assert "PASS: Delta-chain (rational)" in out

    def test_decompose(self, capsys):
        code, out = run(capsys, "decompose", "simple", "V2")
        assert code == 0
        assert "(3/8)*H_2^1" in out and "(-3/8)*H_1^2" in out and "(60)*H_1^1" in out


class TestErrors:
    def test_bad_model_exit_2(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"weights": {"1,0": "1/2", "-1,0": "1/4", "0,1": "1/8", "0,-1": "1/8"}}))
        code, _ = run(capsys, "analyze", str(p))
        assert code == 2
