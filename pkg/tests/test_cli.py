import csv
import io
import json

import pytest

from app.cli import main
from app.services.export import COMPARE_HEADER
from app.services.series import eval_exact_sequence
from app.services.weights import Power, WeightSequence


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_constant(capsys):
    code, out, _ = run(capsys, "expand", "--family", "constant", "--n", "4")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "1"
    assert rows[4] == "0,1,2,1,1"


def test_expand_methods_agree(capsys):
    _, product, _ = run(capsys, "expand", "--family", "ap:a=1,j=2", "--n", "8", "--method", "product")
    _, recurrence, _ = run(
        capsys, "expand", "--family", "ap:a=1,j=2", "--n", "8", "--method", "recurrence"
    )
    assert product == recurrence
    assert sum(int(c) for c in product.splitlines()[5].split(",")) == 3


def test_expand_irrational_family_prints_floats(capsys):
    code, out, _ = run(capsys, "expand", "--family", "power:s0=1.5", "--n", "3")
    assert code == 0
    assert out.splitlines()[1] == "0,1"


def test_eval_json_lines(capsys):
    code, out, _ = run(capsys, "eval", "--family", "constant", "--z", "1", "--n", "4", "20")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["n"] for r in records] == [4, 20]
    assert records[1]["re"] == pytest.approx(627.0)
    assert records[1]["im"] == 0.0


def test_eval_json_floats_round_trip(capsys):
    z = 0.3 - 0.7j
    _, out, _ = run(capsys, "eval", "--family", "power:s0=2", "--z", "0.3-0.7i", "--n", "17")
    expected = complex(eval_exact_sequence(WeightSequence(Power(2.0)), z, 17)[17])
    record = json.loads(out)
    assert complex(record["re"], record["im"]) == expected


def test_eval_contour(capsys):
    code, out, _ = run(
        capsys, "eval", "--family", "constant", "--z", "0.3", "--n", "10", "--method", "contour"
    )
    _, exact, _ = run(capsys, "eval", "--family", "constant", "--z", "0.3", "--n", "10")
    assert code == 0
    assert json.loads(out)["re"] == pytest.approx(json.loads(exact)["re"], rel=1e-8)


def test_asymp_record(capsys):
    code, out, _ = run(capsys, "asymp", "--family", "power:s0=2", "--z", "-0.2", "--n", "500")
    assert code == 0
    record = json.loads(out)
    assert record["family"] == "power:s0=2.0"
    assert record["dominant"] == {"h": 1, "k": 1}
    assert record["arcs"][0]["branch"] == "oscillatory"
    assert record["mu"] == pytest.approx(0.33)


def test_compare_csv(capsys):
    code, out, _ = run(
        capsys, "compare", "--family", "constant", "--z", "0.5", "--n", "100", "200", "--threads", "2"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == COMPARE_HEADER
    assert [row[0] for row in rows[1:]] == ["100", "200"]
    assert float(rows[2][5]) < float(rows[1][5])


def test_classify_and_crossover(capsys):
    _, out, _ = run(capsys, "classify", "--family", "constant", "--z", "-0.9")
    assert json.loads(out)["dominant"] == {"h": 1, "k": 2}
    _, out, _ = run(capsys, "crossover", "--family", "power:s0=2")
    assert -0.9 < json.loads(out)["crossover"] < -0.8


def test_dirichlet_and_meinardus(capsys):
    _, out, _ = run(capsys, "dirichlet", "--family", "ap:a=1,j=2", "--k", "4")
    record = json.loads(out)
    assert [round(b["re"], 12) for b in record["b"]] == [0.0, 0.25, 0.0, -0.25]
    _, out, _ = run(capsys, "meinardus", "--family", "constant", "--n", "100")
    record = json.loads(out)
    assert record["kappa"] == pytest.approx(-1.0)
    assert record["value"] == pytest.approx(190569292, rel=0.06)


def test_phase_map_ppm_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.ppm", tmp_path / "b.ppm"
    table = tmp_path / "map.csv"
    common = ["--family", "constant", "--resolution", "48x32", "--k-max", "6"]
    assert main(["phase-map", *common, "--output", str(first), "--csv", str(table)]) == 0
    assert main(["phase-map", *common, "--output", str(second), "--threads", "3"]) == 0
    data = first.read_bytes()
    assert data.startswith(b"P6")
    assert data == second.read_bytes()
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["x", "y", "h", "k", "boundary"]
    assert len(rows) == 1 + 48 * 32


@pytest.mark.parametrize(
    "argv,code",
    [
        (["expand", "--family", "bogus", "--n", "3"], 2),
        (["expand", "--family", "constant", "--n", "-1"], 2),
        (["classify", "--family", "constant", "--z", "0.5", "--k-max", "0"], 2),
        (["phase-map", "--family", "constant", "--resolution", "10by10", "-o", "x.ppm"], 2),
        (["phase-map", "--family", "constant", "--resolution", "10x10"], 2),
        (["classify", "--family", "constant", "--z", "0"], 3),
        (["asymp", "--family", "constant", "--z", "1.5", "--n", "10"], 3),
        (["expand", "--family", "power:s0=0.5", "--n", "3", "--method", "product"], 4),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert any(line.startswith(f"polymeinardus {argv[0]}:") for line in err.splitlines())
