import json

import pytest

from chembalance.cli import main

CAYLEY_MENGER = "0 1 1 1\n1 0 4 9\n1 4 0 16\n1 9 16 0\n"
REYNOLDS = "1 1 0 0\n-1 -3 1 1\n-1 0 -1 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBalance:
    def test_ionic(self, capsys):
        code, out, _ = run(
            capsys, "balance", "H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-"
        )
        assert code == 0
        assert out.strip() == "H2O + 2 MnO4^- + 3 SO3^2- -> 2 OH^- + 2 MnO2 + 3 SO4^2-"

    def test_infeasible_is_exit_zero(self, capsys):
        code, out, err = run(capsys, "balance", "FeS + H2SO4 + FeSO4 + H2O")
        assert code == 0
        assert "no balanced reaction exists" in out

    def test_json_fields(self, capsys):
        code, out, _ = run(capsys, "balance", "H2 + O2 -> H2O", "--json")
        blob = json.loads(out)
        assert blob["feasible"] is True
        assert blob["basis"] == [["-2", "-1", "2"]]
        assert blob["equations"] == ["2 H2 + O2 -> 2 H2O"]

    def test_parametric(self, capsys):
        code, out, _ = run(capsys, "balance", "CO + H2 -> CnH2n+2 + H2O", "--param", "n")
        assert code == 0
        assert out.strip() == "n CO + (2n+1) H2 -> CnH2n+2 + n H2O"

    def test_quiver_with_explain(self, capsys):
        code, out, err = run(
            capsys,
            "balance",
            "ACD + ABDE + B2C3DE + DEFGH + E2H + E6F + FG3 + GH",
            "--quiver",
            "--explain",
        )
        assert code == 0
        assert out.strip() == "3 E2H + FG3 -> E6F + 3 GH"
        assert "pruning depth: 2" in err
        assert "DEFGH" in err

    def test_atom_order(self, capsys):
        code, out, _ = run(
            capsys,
            "balance",
            "H2O + MnO4^- + SO3^2- -> OH^- + MnO2 + SO4^2-",
            "--atom-order",
            "H,Mn,S,O",
        )
        assert code == 0 and "2 MnO2" in out

    def test_parse_error_exits_two(self, capsys):
        code, _, err = run(capsys, "balance", "H2O + + ->")
        assert code == 2
        assert "error" in err


class TestKernel:
    def test_reynolds_from_file(self, capsys, tmp_path):
        path = tmp_path / "reynolds.txt"
        path.write_text(REYNOLDS)
        code, out, _ = run(capsys, "kernel", str(path))
        assert code == 0
        assert out.strip() == "(1, -1, -1, -1)"

    def test_literal_input(self, capsys):
        code, out, _ = run(capsys, "kernel", "1 1; 2 2")
        assert code == 0
        assert out.strip() == "(1, -1)"

    def test_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(REYNOLDS))
        code, out, _ = run(capsys, "kernel", "-")
        assert code == 0 and "(1, -1, -1, -1)" in out

    def test_trace_checksums_golden(self, capsys):
        code, out, _ = run(
            capsys, "kernel", "1 1 1 1; 1 2 3 4; 1 3 6 10", "--trace", "--checksums"
        )
        assert code == 0
        sums = []
        for line in out.splitlines():
            if "||" in line:
                sums.append(int(line.rsplit("||", 1)[1]))
            elif line.startswith("step") and sums:
                pass
        assert sums == [4, 7, 11, 16, 3, 7, 12, 1, 3, 0]
        assert "checksums: ok" in out

    def test_json_roundtrip(self, capsys):
        code, out, _ = run(capsys, "kernel", "1 1; 2 2", "--json")
        blob = json.loads(out)
        assert blob == {"kernel": [["1", "-1"]], "dim": 1, "saturated": True}

    def test_trivial_kernel(self, capsys):
        code, out, _ = run(capsys, "kernel", "1 0; 0 1")
        assert out.strip() == "kernel is trivial"

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "kernel", "1 x; 2 3")
        assert code == 2 and "error" in err


class TestDet:
    def test_cayley_menger(self, capsys, tmp_path):
        path = tmp_path / "cm.txt"
        path.write_text(CAYLEY_MENGER)
        code, out, _ = run(capsys, "det", str(path))
        assert code == 0 and out.strip() == "-135"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "det", "2 0; 0 3", "--json")
        assert json.loads(out) == {"det": "6"}

    def test_polynomial(self, capsys):
        code, out, _ = run(capsys, "det", "n 1; 1 n", "--param", "n")
        assert out.strip() == "n^2-1"


class TestSolve:
    def test_progression_system(self, capsys):
        code, out, _ = run(
            capsys,
            "solve",
            "1 2 3 4; 1 3 5 7; 1 4 7 10; 1 5 9 13",
            "10 16 22 28",
        )
        assert code == 0
        assert "particular: (-2, 6, 0, 0)" in out
        assert "homogeneous: (1, -2, 1, 0)" in out

    def test_infeasible(self, capsys):
        code, out, _ = run(capsys, "solve", "1; 1", "0 1")
        assert code == 0 and "infeasible" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "solve", "2 0; 0 2", "1 3", "--json")
        blob = json.loads(out)
        assert blob["feasible"] and blob["particular"] == ["1/2", "3/2"]


class TestInv:
    def test_exact_halves(self, capsys):
        code, out, _ = run(
            capsys, "inv", "1 2 3 5; 2 3 5 7; 3 5 7 11; 5 7 11 13"
        )
        assert code == 0
        assert out.splitlines()[0].split() == ["-6", "3", "2", "-1"]
        assert "-3/2" in out

    def test_singular_exits_one(self, capsys):
        code, _, err = run(capsys, "inv", "1 2; 2 4")
        assert code == 1 and "singular" in err

    def test_json(self, capsys):
        code, out, _ = run(capsys, "inv", "2 0; 0 2", "--json")
        assert json.loads(out) == {"inverse": [["1/2", "0"], ["0", "1/2"]]}


class TestSubspaces:
    def test_hankel(self, capsys):
        code, out, _ = run(
            capsys,
            "subspaces",
            "0 1 1 2; 1 1 2 4; 1 2 4 7; 2 4 7 13; 4 7 13 24",
        )
        assert code == 0
        assert "rank: 3" in out
        assert "image columns: 2, 1, 3" in out
        assert "transpose image columns: 1, 2, 3" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "subspaces", "0 0; 0 0", "--json")
        blob = json.loads(out)
        assert blob["rank"] == 0
        assert blob["kernel"] == [["1", "0"], ["0", "1"]]


class TestSmithCli:
    def test_invariant_factors(self, capsys):
        code, out, _ = run(
            capsys, "smith", "3 4 5 6; 7 8 9 10; 11 12 13 14; 15 16 17 18"
        )
        assert code == 0 and "invariant factors: 1, 4" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "smith", "2 0; 0 4", "--json")
        blob = json.loads(out)
        assert blob["invariant_factors"] == ["2", "4"]
        assert blob["d"]["entries"] == [["2", "0"], ["0", "4"]]


class TestSaturateCli:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "saturate", "-2 -4; -1 -3; 2 0; 0 2")
        assert code == 0
        assert out.strip().splitlines() == ["(2, 1, -2, 0)", "(1, 0, -3, 1)"]

    def test_rank_deficient_exits_two(self, capsys):
        code, _, err = run(capsys, "saturate", "1 2; 2 4")
        assert code == 2


class TestUsage:
    def test_unknown_command_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestJsonSchemas:
    def test_smith_matrices_roundtrip(self, capsys):
        from chembalance.matrix import matrix_from_json

        code, out, _ = run(capsys, "smith", "3 4 5 6; 7 8 9 10; 11 12 13 14; 15 16 17 18", "--json")
        blob = json.loads(out)
        d = matrix_from_json(blob["d"])
        u = matrix_from_json(blob["u"])
        v = matrix_from_json(blob["v"])
        from chembalance.matrix import parse_matrix

        a = parse_matrix("3 4 5 6\n7 8 9 10\n11 12 13 14\n15 16 17 18")
        assert d == u @ a @ v

    def test_inverse_entries_parse_back(self, capsys):
        from chembalance.ring import FractionField, ZZ

        code, out, _ = run(capsys, "inv", "1 2 3 5; 2 3 5 7; 3 5 7 11; 5 7 11 13", "--json")
        blob = json.loads(out)
        ff = FractionField(ZZ)
        parsed = [[ff.parse(v) for v in row] for row in blob["inverse"]]
        assert str(parsed[2][2]) == "-3/2"

    def test_kernel_saturated_flag_post_verified(self, capsys):
        # two-dimensional integer kernel that happens to be saturated
        code, out, _ = run(capsys, "kernel", "1 0 0 0; 0 1 0 0", "--json")
        blob = json.loads(out)
        assert blob["dim"] == 2 and blob["saturated"] is True
