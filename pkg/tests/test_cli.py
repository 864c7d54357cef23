import json

import pytest

from datamarket.cli import main
from datamarket.fixtures import gen_greedy_suboptimal, gen_lingap, gen_nonsub
from datamarket.model import save_instance, save_prices


@pytest.fixture
def suboptimal_path(tmp_path):
    path = tmp_path / "suboptimal.json"
    save_instance(gen_greedy_suboptimal(), path)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_solve_linear_exact(capsys, suboptimal_path):
    code, out = run(capsys, ["solve-linear", "--instance", suboptimal_path, "--method", "exact"])
    assert code == 0
    doc = json.loads(out)
    assert doc["revenue"] == pytest.approx(1.3)
    assert doc["prices"] == [0.2, 0.2, 0.5]
    assert doc["method"] == "exact"


def test_solve_linear_is_byte_deterministic(capsys, suboptimal_path):
    argv = ["solve-linear", "--instance", suboptimal_path, "--method", "rgreedy", "--seed", "7"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second


def test_solve_plc_is_byte_deterministic(capsys, suboptimal_path):
    argv = ["solve-plc", "--instance", suboptimal_path, "--allocate"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second


def test_solve_linear_greedy_order_flag(capsys, suboptimal_path):
    code, out = run(capsys, [
        "solve-linear", "--instance", suboptimal_path, "--method", "greedy", "--order", "2,1,0",
    ])
    assert code == 0
    assert json.loads(out)["revenue"] <= 1.2 + 1e-9


def test_solve_plc_lingap(capsys, tmp_path):
    path = tmp_path / "lingap.json"
    save_instance(gen_lingap(3, 0.1), path)
    code, out = run(capsys, ["solve-plc", "--instance", str(path), "--allocate"])
    assert code == 0
    doc = json.loads(out)
    assert doc["total_revenue"] == pytest.approx(0.45)
    assert doc["allocation"]["total_revenue"] == pytest.approx(0.45)
    assert len(doc["curves"]) == 1


def test_solve_plc_writes_output_file(capsys, suboptimal_path, tmp_path):
    out_path = tmp_path / "solution.json"
    code, out = run(capsys, ["solve-plc", "--instance", suboptimal_path, "--out", str(out_path)])
    assert code == 0
    assert json.loads(out_path.read_text()) == json.loads(out)


def test_demand_subcommand(capsys, tmp_path):
    inst_path = tmp_path / "inst.json"
    save_instance(gen_nonsub(0.001), inst_path)
    price_path = tmp_path / "prices.json"
    save_prices((0.001, 1.0), price_path)
    code, out = run(capsys, [
        "demand", "--instance", str(inst_path), "--prices", str(price_path), "--buyer", "1",
    ])
    assert code == 0
    doc = json.loads(out)
    # desire 1.001 exceeds the budget of 1, so only the surplus dataset is bought
    assert doc["payment"] == pytest.approx(1.0)
    assert doc["fractions"] == [0.0, 1.0]


def test_clear_subcommand(capsys, tmp_path):
    inst_path = tmp_path / "inst.json"
    save_instance(gen_nonsub(0.001), inst_path)
    price_path = tmp_path / "prices.json"
    save_prices((5.0, 5.0), price_path)
    code, out = run(capsys, [
        "clear", "--instance", str(inst_path), "--prices", str(price_path),
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["clearable"] is True
    total_before = sum(doc["before"]["per_buyer_revenue"])
    total_after = sum(doc["after"]["per_buyer_revenue"])
    assert total_after >= total_before - 1e-9
    assert all(a <= b + 1e-12 for a, b in zip(doc["after"]["prices"], doc["before"]["prices"]))


def test_gen_roundtrip(capsys, tmp_path):
    out_path = tmp_path / "generated.json"
    code, out = run(capsys, [
        "gen", "--family", "lingap", "--params", "n=3,eps=0.1", "--out", str(out_path),
    ])
    assert code == 0
    assert json.loads(out)["n"] == 3
    code, out = run(capsys, ["solve-plc", "--instance", str(out_path)])
    assert code == 0
    assert json.loads(out)["total_revenue"] == pytest.approx(0.45)


def test_check_appendix_b(capsys):
    code, out = run(capsys, ["check", "--property", "appendixB"])
    assert code == 0
    doc = json.loads(out)
    assert doc == {"extension_infeasible": True, "relaxed_feasible": True}


def test_check_ksubmodular(capsys, suboptimal_path):
    code, out = run(capsys, [
        "check", "--property", "ksubmodular", "--instance", suboptimal_path,
        "--samples", "300", "--seed", "5",
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["holds"] is True
    assert doc["max_violation"] <= 1e-9


def test_check_extension(capsys):
    code, out = run(capsys, ["check", "--property", "extension", "--samples", "200"])
    assert code == 0
    assert json.loads(out)["holds"] is True


def test_validate_gaussian(capsys):
    code, out = run(capsys, [
        "validate-gaussian", "--tau0", "1.0", "--tau", "1.0", "--counts", "3",
        "--trials", "20000", "--seed", "4",
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["theoretical_gain"] == pytest.approx(3.0)
    assert doc["expected_variance"] == pytest.approx(0.25)
    assert abs(doc["z_score"]) <= 5.0


def test_unknown_flag_exits_2(suboptimal_path):
    with pytest.raises(SystemExit) as exc:
        main(["solve-linear", "--instance", suboptimal_path, "--method", "exact", "--bogus"])
    assert exc.value.code == 2


def test_missing_file_exits_1(capsys):
    assert main(["solve-plc", "--instance", "/nonexistent/instance.json"]) == 1
    assert "error:" in capsys.readouterr().err


def test_invalid_instance_exits_1(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"budgets": [1, 1], "values": [[1.0]]}))
    assert main(["solve-plc", "--instance", str(path)]) == 1
    assert "error:" in capsys.readouterr().err
