import pytest

from cli import cli_main
from diagrams.text_format import parse_family_text, read_family_file
from utils.data_utils import read_csv


@pytest.fixture
def join_inputs(tmp_path):
    a = tmp_path / "a.fam"
    b = tmp_path / "b.fam"
    a.write_text("elements: a,b,c\na\nb\n", encoding="utf-8")
    b.write_text("elements: a,b,c\nb\nc\n", encoding="utf-8")
    return a, b


def test_eval_join_to_file(join_inputs, tmp_path):
    a, b = join_inputs
    out = tmp_path / "c.fam"
    dot = tmp_path / "c.dot"
    code = cli_main(["eval", "--op", "join", "--f", str(a), "--g", str(b), "--out", str(out), "--dot", str(dot)])
    assert code == 0
    assert read_family_file(out).name_sets() == [("b",), ("a", "b"), ("a", "c"), ("b", "c")]
    assert dot.read_text(encoding="utf-8").startswith("digraph")


def test_eval_to_stdout(join_inputs, capsys):
    a, b = join_inputs
    assert cli_main(["eval", "--op", "meet", "--f", str(a), "--g", str(b)]) == 0
    assert parse_family_text(capsys.readouterr().out).name_sets() == [(), ("b",)]


def test_eval_condition_drops_conditioned_elements(tmp_path, capsys):
    f = tmp_path / "f.fam"
    f.write_text("elements: a,b,c\na\na,b\n", encoding="utf-8")
    assert cli_main(["eval", "--op", "condition", "--f", str(f), "--y", "a"]) == 0
    assert capsys.readouterr().out == "elements: b,c\n{}\nb\n"


def test_eval_usage_errors(join_inputs, tmp_path):
    a, b = join_inputs
    bad = tmp_path / "bad.fam"
    bad.write_text("a,b\n", encoding="utf-8")
    assert cli_main(["eval", "--op", "join", "--f", str(a)]) == 2
    assert cli_main(["eval", "--op", "maximal", "--f", str(a), "--g", str(b)]) == 2
    assert cli_main(["eval", "--op", "maximal", "--f", str(bad)]) == 2
    assert cli_main(["eval", "--op", "maximal", "--f", str(tmp_path / "missing.fam")]) == 2
    assert cli_main(["eval", "--op", "no_such_op", "--f", str(a)]) == 2


def test_eval_rejects_conditioning_sets_for_other_ops(join_inputs, capsys):
    a, b = join_inputs
    assert cli_main(["eval", "--op", "join", "--f", str(a), "--g", str(b), "--y", "a"]) == 2
    assert cli_main(["eval", "--op", "maximal", "--f", str(a), "--y-prime", "b"]) == 2
    assert capsys.readouterr().out == ""


def test_gen_base_family(capsys):
    assert cli_main(["gen", "--kind", "H", "--m", "3"]) == 0
    assert parse_family_text(capsys.readouterr().out).cardinality == 4


def test_gen_theorem_instance(tmp_path):
    f, g, expected = tmp_path / "f.fam", tmp_path / "g.fam", tmp_path / "h.fam"
    code = cli_main(["gen", "--theorem", "meet", "--m", "3", "--out", str(f), "--g-out", str(g),
                     "--expected-out", str(expected)])
    assert code == 0
    assert read_family_file(g).name_sets() == [("y1", "y2", "y3")]
    assert read_family_file(expected).cardinality == 4
    assert read_family_file(f).universe == ("x1", "x2", "x3", "y1", "y2", "y3")


def test_gen_usage_errors(tmp_path):
    assert cli_main(["gen", "--m", "3"]) == 2
    assert cli_main(["gen", "--kind", "H", "--theorem", "meet", "--m", "3"]) == 2
    assert cli_main(["gen", "--kind", "E", "--m", "3"]) == 2
    assert cli_main(["gen", "--theorem", "closure", "--m", "2", "--expected-out", str(tmp_path / "x.fam")]) == 2


def test_blowup_csv_file(tmp_path):
    path = tmp_path / "out.csv"
    assert cli_main(["blowup", "--op", "join", "--mmin", "2", "--mmax", "12", "--csv", str(path)]) == 0
    assert path.read_text(encoding="utf-8").splitlines()[0] == "op,m,z_f,z_g,z_out,count_out,elapsed_ms"
    assert len(read_csv(path)) == 11


def test_blowup_csv_stdout(capsys):
    assert cli_main(["blowup", "--op", "meet", "--mmin", "2", "--mmax", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "op,m,z_f,z_g,z_out,count_out,elapsed_ms"
    assert [line.split(",")[1] for line in lines[1:]] == ["2", "3", "4"]


def test_blowup_usage_errors():
    assert cli_main(["blowup", "--op", "union", "--mmin", "2", "--mmax", "3"]) == 2
    assert cli_main(["blowup", "--op", "join", "--mmin", "2", "--mmax", "30"]) == 2
    assert cli_main(["blowup", "--op", "join", "--mmin", "2", "--mmax", "3", "--check-growth"]) == 2


def test_orders(capsys, tmp_path):
    path = tmp_path / "orders.csv"
    assert cli_main(["orders", "--op", "meet", "--m", "2", "--exhaustive", "--csv", str(path)]) == 0
    assert len(read_csv(path)) == 24
    assert cli_main(["orders", "--op", "meet", "--m", "5", "--exhaustive"]) == 2


def test_bounds():
    assert cli_main(["bounds", "--mmax", "3", "--samples", "1"]) == 0


def test_selftest():
    assert cli_main(["selftest", "--instances", "2", "--canonicity", "5", "--conditioning", "5", "--seed", "3"]) == 0


def test_log_file_option(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    assert cli_main(["--log-level", "INFO", "--log-file", str(log_file), "gen", "--kind", "P", "--m", "2"]) == 0
    assert log_file.exists()
