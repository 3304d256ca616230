import io
import subprocess

import pytest

from cmpz.cli import EXIT_FAILED, EXIT_INPUT, EXIT_LIMIT, EXIT_OK, main

Z_19_01 = 5.497433097477961458072e28


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def record(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


def stats_rows(text):
    lines = text.splitlines()
    assert lines[0].split() == ["quantity", "exact", "asymptotic", "rel_gap"]
    return {parts[0]: parts[1:] for parts in (line.split() for line in lines[1:])}


class TestEval:
    def test_poisson_one(self):
        code, text = run("eval", "--lambda", "1", "--nu", "1", "--method", "exact")
        assert code == EXIT_OK
        rec = record(text)
        assert rec["Z"] == "2.718281828459045"
        assert float(rec["log10(Z)"]) == pytest.approx(0.4342944819032518, rel=1e-15)
        assert int(rec["terms_used"]) > 0

    def test_headline_value(self):
        code, text = run("eval", "--lambda", "1.9", "--nu", "0.1", "--method", "exact")
        assert code == EXIT_OK
        z = float(record(text)["Z"])
        assert f"{z:.14e}" == "5.49743309747796e+28"

    def test_headline_asymptotic(self):
        _, text = run("eval", "--lambda", "1.9", "--nu", "0.1", "--method", "asym", "--order", "8")
        rec = record(text)
        assert rec["order"] == "8"
        assert abs(float(rec["Z"]) / Z_19_01 - 1) <= 5e-13
        assert [k for k in rec if k.startswith("term[")] == [f"term[{k}]" for k in range(8)]

    def test_beyond_double_range(self):
        code, text = run("eval", "--lambda", "1000000", "--nu", "1")
        assert code == EXIT_OK
        assert record(text)["Z"].startswith("3.0332153968020")
        assert record(text)["Z"].endswith("e+434294")

    @pytest.mark.parametrize(
        "argv",
        [
            ("--lambda", "1", "--nu", "0"),
            ("--lambda", "-1", "--nu", "1"),
            ("--lambda", "abc", "--nu", "1"),
            ("--lambda", "0.5", "--nu", "0", "--method", "asym"),
            ("--lambda", "2", "--nu", "2", "--method", "asym", "--order", "9"),
            ("--lambda", "2", "--nu", "2", "--rel-tol", "0"),
        ],
    )
    def test_invalid_input(self, argv, capsys):
        code, text = run("eval", *argv)
        assert code == EXIT_INPUT
        assert text == ""
        err = capsys.readouterr().err
        assert err.startswith("error: ") and err.count("\n") == 1

    def test_resource_limit(self, capsys):
        code, _ = run("eval", "--lambda", "10", "--nu", "0.01")
        assert code == EXIT_LIMIT
        assert "10000000" in capsys.readouterr().err

    def test_missing_flag(self):
        with pytest.raises(SystemExit) as info:
            run("eval", "--nu", "1")
        assert info.value.code == 2


class TestTable:
    def test_table1_render(self):
        code, text = run("table", "--preset", "table1")
        assert code == EXIT_OK
        lines = text.splitlines()
        assert len(lines) == 31
        assert lines[1].split()[:3] == ["0.1", "1", "-100"]
        assert "-101" in lines[2].split()

    def test_csv_written(self, tmp_path):
        path = tmp_path / "t2.csv"
        code, _ = run("table", "--preset", "table2", "--csv", str(path), "--raw")
        assert code == EXIT_OK
        data = path.read_bytes()
        assert b"\r" not in data
        rows = data.decode().splitlines()
        assert rows[0] == "lambda,nu,order,percent_error"
        assert len(rows) == 145
        cell = next(r for r in rows if r.startswith("7.0,4.0,2,"))
        assert float(cell.split(",")[3]) == pytest.approx(-0.945, abs=5e-4)

    def test_display_csv(self, tmp_path):
        path = tmp_path / "t1.csv"
        run("table", "--preset", "table1", "--csv", str(path))
        rows = path.read_text().splitlines()
        assert "1.5,0.1,3,0.032" in rows
        assert "0.1,0.1,1,-100" in rows

    def test_unwritable_path(self, tmp_path, capsys):
        code, _ = run("table", "--preset", "table2", "--csv", str(tmp_path / "missing" / "x.csv"))
        assert code == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error: cannot write")

    def test_custom(self):
        code, text = run("table", "--preset", "custom", "--lambdas", "2,4", "--nus", "0.5", "--orders", "1,8")
        assert code == EXIT_OK
        assert len(text.splitlines()) == 5

    def test_custom_needs_grid(self):
        assert run("table", "--preset", "custom", "--lambdas", "2")[0] == EXIT_INPUT
        assert run("table", "--preset", "custom", "--lambdas", "2,x", "--nus", "1")[0] == EXIT_INPUT


class TestStats:
    def test_poisson_one(self):
        code, text = run("stats", "--lambda", "1", "--nu", "1")
        assert code == EXIT_OK
        rows = stats_rows(text)
        for name in ("mean", "variance", "gamma1", "gamma2"):
            exact, asym, _ = rows[name]
            assert float(exact) == pytest.approx(1.0, rel=1e-13)
            assert float(asym) == pytest.approx(1.0, rel=1e-13)

    def test_geometric_has_no_asymptotic_column(self):
        code, text = run("stats", "--lambda", "0.5", "--nu", "0")
        assert code == EXIT_OK
        rows = stats_rows(text)
        assert rows["mean"][1] == "unavailable"
        assert float(rows["variance"][0]) == pytest.approx(2.0, rel=1e-13)

    def test_ten_two_gaps(self):
        _, text = run("stats", "--lambda", "10", "--nu", "2", "--n-max", "3")
        rows = stats_rows(text)
        alpha = 10**0.5
        for name in ("mean", "variance", "kappa3"):
            assert float(rows[name][2]) <= 5 * alpha**-4 * 4
        assert float(rows["mu'2"][2]) <= 1e-14

    def test_exact_only(self):
        _, text = run("stats", "--lambda", "3", "--nu", "2", "--method", "exact")
        assert stats_rows(text)["mean"][1] == "-"

    def test_order_cap(self):
        assert run("stats", "--lambda", "3", "--nu", "2", "--n-max", "7")[0] == EXIT_INPUT


class TestVerify:
    @pytest.mark.parametrize("suite, count", [("coeffs", 8), ("limit", 3), ("special-cases", 5)])
    def test_suites_pass(self, suite, count):
        code, text = run("verify", suite)
        lines = text.splitlines()
        assert len(lines) == count
        assert all(line.startswith("PASS ") for line in lines), text
        assert code == EXIT_OK

    def test_failure_exit_code(self, monkeypatch):
        import cmpz.cli as cli

        monkeypatch.setattr(cli, "verify_poisson_expectation_limit", lambda nu, alphas: 0.0)
        code, text = run("verify", "limit")
        assert code == EXIT_FAILED
        assert text.startswith("FAIL ")


def test_console_script():
    proc = subprocess.run(["cmpz", "eval", "--lambda", "0.5", "--nu", "0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Z = 2.0" in proc.stdout
