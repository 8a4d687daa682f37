import csv
import io
import json

import numpy as np
import pytest

from mursdp.cli import main
from mursdp.observables import fourier_pair, spin1_triple
from mursdp.problemfile import csv_header, fmt, parse_problem, read_csv, write_csv
from mursdp.region import ProblemInstance, offset, sample_weights, trace_boundary
from mursdp.transport import CostFunction


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


SPIN1_DOC = {
    "dim": 3,
    "observables": [{"name": f"L{k}", "builtin": f"spin1_L{k}"} for k in (1, 2, 3)],
    "costs": [{"type": "quadratic", "values": [-1, 0, 1]}],
    "measure": "C",
    "weights": [1 / 3, 1 / 3, 1 / 3],
}

QUBIT_DOC = {
    "dim": 2,
    "observables": [
        {"name": "Q", "basis": [[1, 0], [0, 1]]},
        {"name": "P", "basis": [[[0.7071067811865476, 0], [0.7071067811865476, 0]],
                                [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]},
    ],
    "costs": [{"type": "discrete"}, {"type": "discrete"}],
    "measure": "E",
    "weights": {"samples": 5},
}


def test_transport_discrete():
    code, text = run(["transport", "--cost", "discrete", "--p", "0.7", "0.3", "--q", "0.3", "0.7"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "primal 0.4" and lines[1] == "dual   0.4"


def test_transport_equal():
    code, text = run(["transport", "--cost", "quadratic", "--values", "0", "1", "2",
                      "--p", "0.2", "0.3", "0.5", "--q", "0.2", "0.3", "0.5"])
    assert code == 0
    assert text.splitlines()[0] == "primal 0"


def test_transport_gap_quadratic():
    rng = np.random.default_rng(8)
    for _ in range(10):
        p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        code, text = run(["transport", "--cost", "quadratic", "--values", "-1", "0", "1",
                          "--p", *map(str, p.tolist()), "--q", *map(str, q.tolist())])
        assert code == 0
        assert float(text.splitlines()[2].split()[1]) < 1e-9


def test_transport_matrix_cost():
    code, text = run(["transport", "--cost", "matrix", "--matrix", "[[1, 0.5]]", "--p", "1", "--q", "0.5", "0.5"])
    assert code == 0 and text.splitlines()[0] == "primal 0.75"


@pytest.mark.parametrize("argv", [
    ["transport", "--p", "0.7", "0.2", "--q", "0.5", "0.5"],
    ["transport", "--cost", "matrix", "--matrix", "[[0, 1]", "--p", "1", "--q", "0.5", "0.5"],
    ["transport", "--cost", "power", "--p", "1", "--q", "1"],
    ["mccm", "--cost", "discrete"],
])
def test_validation_exit_code(argv):
    assert run(argv)[0] == 2


def test_mccm_quadratic():
    code, text = run(["mccm", "--cost", "quadratic", "--values", "-1", "0", "1"])
    assert code == 0
    lines = text.splitlines()
    count = int(next(l for l in lines if l.startswith("count")).split()[1])
    assert count <= 6
    assert "bound 6" in lines


def test_mccm_discrete_metric():
    code, text = run(["mccm", "--cost", "discrete", "--d", "2"])
    assert code == 0
    lines = text.splitlines()
    phis = [l.split()[1:] for l in lines if l.strip().startswith("phi")]
    psis = [l.split()[1:] for l in lines if l.strip().startswith("psi")]
    assert phis == psis and len(phis) == 2
    assert not any(l.startswith("bound") for l in lines)


def test_mccm_single_point():
    code, text = run(["mccm", "--cost", "matrix", "--matrix", "[[0]]"])
    assert code == 0 and "count 1" in text


def test_missing_file_exit_code(tmp_path):
    assert run(["region", str(tmp_path / "nope.json")])[0] == 4


def test_bad_json_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dim": 2,\n "observables": [}')
    assert run(["region", str(p)])[0] == 2
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize("doc, field", [
    ({**QUBIT_DOC, "dim": 1}, "dim"),
    ({**QUBIT_DOC, "observables": [{"builtin": "nope"}]}, "observables[0]"),
    ({**QUBIT_DOC, "observables": [{"basis": [[1, 1], [0, 1]]}, QUBIT_DOC["observables"][1]]}, "observables[0]"),
    ({**QUBIT_DOC, "costs": [{"type": "taxicab"}]}, "costs[0].type"),
    ({**QUBIT_DOC, "measure": "D"}, "measure"),
    ({**QUBIT_DOC, "weights": [[1, 0, 0]]}, "weights[0]"),
])
def test_problem_validation_messages(tmp_path, capsys, doc, field):
    assert run(["region", write_json(tmp_path / "p.json", doc)])[0] == 2
    assert field in capsys.readouterr().err


def test_region_spin1_matches_library(tmp_path):
    code, text = run(["region", write_json(tmp_path / "p.json", SPIN1_DOC)])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == csv_header(3)
    assert len(rows) == 2
    q = CostFunction.quadratic([-1, 0, 1])
    bp = offset(ProblemInstance(list(spin1_triple()), [q] * 3), "C", [1 / 3] * 3)
    assert rows[1][5] == fmt(bp.b)
    assert rows[1][6:9] == [fmt(v) for v in bp.epsilon]
    assert rows[1][-1] == "optimal"


def test_region_unit_weight(tmp_path):
    doc = {**SPIN1_DOC, "weights": [[1, 0, 0]], "measure": "M"}
    code, text = run(["region", write_json(tmp_path / "p.json", doc)])
    assert code == 0
    row = list(csv.DictReader(io.StringIO(text)))[0]
    assert abs(float(row["b"])) <= 1e-7


def test_region_outputs_roundtrip(tmp_path):
    prob = write_json(tmp_path / "q.json", QUBIT_DOC)
    out, js, svg = tmp_path / "r.csv", tmp_path / "r.json", tmp_path / "r.svg"
    code, text = run(["region", prob, "--out", str(out), "--json", str(js), "--svg", str(svg)])
    assert code == 0 and text == ""
    rows = read_csv(out)
    assert len(rows) == 5 and [r["sample_index"] for r in rows] == list(range(5))
    doc = json.loads(js.read_text())
    assert len(doc["points"]) == 5
    for r, p in zip(rows, doc["points"]):
        assert r["b"] == float(fmt(p["b"]))
        assert r["measure"] == "E" == doc["measure"]
        assert abs(r["w_1"] * r["eps_1"] + r["w_2"] * r["eps_2"] - r["b"]) <= 1e-8
    text = svg.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert text.count("<circle") == 5


def test_region_rerun_identical(tmp_path):
    prob = write_json(tmp_path / "q.json", QUBIT_DOC)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["region", prob, "--out", str(a)])
    run(["region", prob, "--out", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_region_library_equivalence(tmp_path):
    prob = write_json(tmp_path / "q.json", QUBIT_DOC)
    _, text = run(["region", prob, "--measure", "M", "--samples", "4"])
    inst = parse_problem(QUBIT_DOC).instance
    sample = trace_boundary(inst, "M", weights=sample_weights(2, 4))
    rows = list(csv.DictReader(io.StringIO(text)))
    for r, p in zip(rows, sample.points):
        assert r["b"] == fmt(p.b)
        assert [r["eps_1"], r["eps_2"]] == [fmt(v) for v in p.epsilon]


def test_demo_library_equivalence():
    _, text = run(["demo", "fourier", "--d", "3", "--measure", "C", "--samples", "3"])
    c = CostFunction.discrete(3)
    sample = trace_boundary(ProblemInstance(list(fourier_pair(3)), [c, c]), "C", weights=sample_weights(2, 3))
    buf = io.StringIO()
    write_csv(buf, sample)
    assert text == buf.getvalue()


def test_demo_fourier(tmp_path):
    svg = tmp_path / "f.svg"
    code, text = run(["demo", "fourier", "--d", "2", "--measure", "E", "--samples", "41", "--svg", str(svg)])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 41
    first, last = rows[0], rows[-1]
    assert abs(float(first["eps_1"])) <= 2e-3 and abs(float(first["eps_2"]) - 0.5) <= 2e-3
    assert abs(float(last["eps_1"]) - 0.5) <= 2e-3 and abs(float(last["eps_2"])) <= 2e-3
    assert svg.exists()


def test_demo_spin1_svg(tmp_path):
    svg = tmp_path / "s.svg"
    code, _ = run(["demo", "spin1", "--measure", "C", "--samples", "3", "--svg", str(svg)])
    assert code == 0
    # three pairwise panels
    assert svg.read_text().count("<rect") == 3


def test_demo_fourier_bad_d():
    assert run(["demo", "fourier", "--d", "1"])[0] == 2


def test_offset_command(tmp_path):
    prob = write_json(tmp_path / "q.json", QUBIT_DOC)
    code, text = run(["offset", prob, "--measure", "C", "--weights", "0.5", "0.5"])
    assert code == 0
    fields = dict(l.split(" ", 1) for l in text.splitlines())
    assert abs(float(fields["b"]) - (1 - 2**-0.5) / 2) <= 1e-6
    assert fields["status"] == "optimal"


def test_error_command(tmp_path):
    prob = write_json(tmp_path / "q.json", QUBIT_DOC)
    approx = write_json(tmp_path / "a.json", {"elements": [[[0.5, 0], [0, 0.5]], [[0.5, 0], [0, 0.5]]]})
    code, text = run(["error", prob, "--approx", approx, "--index", "0"])
    assert code == 0
    vals = dict(l.split(None, 1) for l in text.splitlines())
    assert float(vals["eps_M"]) == pytest.approx(0.5)
    assert float(vals["eps_C"]) == pytest.approx(0.5)
    assert float(vals["eps_E"]) == pytest.approx(0.5)
    assert run(["error", prob, "--approx", approx, "--index", "5"])[0] == 2


def test_noise_option():
    doc = {**QUBIT_DOC, "observables": [{**QUBIT_DOC["observables"][0], "noise": 0.2}, QUBIT_DOC["observables"][1]]}
    prob = parse_problem(doc)
    assert not prob.instance.observables[0].projective


def test_argparse_errors():
    with pytest.raises(SystemExit):
        main(["region", "x.json", "--threads", "0"], out=io.StringIO())
    with pytest.raises(SystemExit):
        main(["bogus"], out=io.StringIO())
