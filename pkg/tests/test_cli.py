"""File format round trips, command behavior, exit codes, determinism."""

import pytest

from gwhitehead import cli
from gwhitehead.errors import ParseError
from gwhitehead.fixtures import all_fixtures, fix_r2w, fix_theta

from conftest import FIXTURE_NAMES

THETA_TEXT = """\
[graph]
basepoint = *
vertex *
vertex v
edge e1 : * -> v
edge e2 : * -> v
edge e3 : * -> v
[group]
order = 2
gen t : e2->e3, e3->e2
[marking]
x1 = e1 ~e2
x2 = e1 ~e3
"""


def _structurally_equal(m1, m2):
    g1, g2 = m1.graph, m2.graph
    return (g1.n_vertices == g2.n_vertices and g1.basepoint == g2.basepoint
            and g1.term == g2.term and g1.group.mult == g2.group.mult
            and g1.edge_action == g2.edge_action
            and m1.basis_paths == m2.basis_paths)


def test_parse_theta_text():
    m = cli.parse(THETA_TEXT)
    assert m.validate() == []
    assert _structurally_equal(m, fix_theta())


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_serialize_parse_roundtrip(name):
    m = all_fixtures()[name]
    m2 = cli.parse(cli.serialize(m))
    assert _structurally_equal(m, m2)
    # and byte-identical at the text level
    assert cli.serialize(m2) == cli.serialize(m)


def test_canonical_text_deterministic(named_instance):
    assert (cli.canonical_text(named_instance)
            == cli.canonical_text(cli.parse(cli.canonical_text(named_instance))))


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        cli.parse("[graph]\nbasepoint = *\nvertex *\nedge e1 * -> *\n")
    assert e.value.line == 4
    with pytest.raises(ParseError) as e:
        cli.parse("vertex w\n")
    assert e.value.line == 1
    with pytest.raises(ParseError):
        cli.parse(THETA_TEXT + "x3 = nosuch\n")


def test_unreduced_marking_warns_but_parses():
    text = THETA_TEXT.replace("x1 = e1 ~e2", "x1 = e1 ~e1 e1 ~e2")
    m = cli.parse(text)
    assert m.warnings
    assert m.basis_paths[0] == (0, 3)


def _write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_validate_command_ok(tmp_path, capsys):
    path = _write(tmp_path, THETA_TEXT)
    assert cli.main(["validate", path]) == 0
    assert "valid:" in capsys.readouterr().out


def test_validate_command_rejects_garbage(tmp_path):
    path = _write(tmp_path, "[graph]\nedge e1 : * ->\n")
    assert cli.main(["validate", path]) == 1


def test_wrong_declared_order_is_a_validation_error(tmp_path):
    path = _write(tmp_path, THETA_TEXT.replace("order = 2", "order = 3"))
    assert cli.main(["validate", path]) == 1


def test_norm_command_deterministic(tmp_path, capsys):
    path = _write(tmp_path, THETA_TEXT)
    assert cli.main(["norm", path, "--horizon", "2", "--kind", "tot"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["norm", path, "--horizon", "2", "--kind", "tot"]) == 0
    assert capsys.readouterr().out == first
    assert "out norm" in first and "aut norm" in first and "legend" in first


def test_ideal_edges_command(tmp_path, capsys):
    path = _write(tmp_path, THETA_TEXT)
    assert cli.main(["ideal-edges", path]) == 0
    out = capsys.readouterr().out
    assert "{~e2,~e3}" in out and "stab=2" in out


def test_move_command_and_bad_collapse_exit_code(tmp_path, capsys):
    path = _write(tmp_path, cli.serialize(fix_r2w()))
    assert cli.main(["move", path, "--vertex", "*",
                     "--alpha", "~a,b", "--collapse", "~a"]) == 0
    out = capsys.readouterr().out
    assert "[marking]" in out
    # collapse target outside D(alpha): hypothesis failure, exit 3
    assert cli.main(["move", path, "--vertex", "*",
                     "--alpha", "~a,b", "--collapse", "a"]) == 3


def test_reduce_command_writes_log(tmp_path, capsys):
    path = _write(tmp_path, cli.serialize(fix_r2w()))
    log = str(tmp_path / "log.txt")
    out = str(tmp_path / "out.txt")
    assert cli.main(["reduce", path, "--log", log, "--out", out]) == 0
    capsys.readouterr()
    assert "whitehead" in open(log).read()
    m2 = cli.parse(open(out).read())
    assert m2.validate() == []
    # both loops are single distinct petals: the minimal marked rose
    assert sorted(len(p) for p in m2.basis_paths) == [1, 1]
    assert len({p[0] // 2 for p in m2.basis_paths}) == 2


def test_star_command_with_retraction(tmp_path, capsys):
    path = _write(tmp_path, cli.serialize(fix_r2w()))
    dot = str(tmp_path / "poset.dot")
    assert cli.main(["star", path, "--family", "R", "--homology",
                     "--retract", "--dot", dot]) == 0
    out = capsys.readouterr().out
    assert "reduced Betti numbers: [0, 0]" in out
    assert "retraction: done" in out
    assert "digraph P" in open(dot).read()


def test_star_command_without_reductive_edges(tmp_path):
    path = _write(tmp_path, cli.serialize(all_fixtures()["FIX-R2"]))
    # no maximally reductive pair: family construction cannot proceed
    assert cli.main(["star", path, "--family", "C0"]) == 3


def test_selftest_command_smoke(tmp_path, capsys):
    assert cli.main(["selftest", "--suite", "norms", "--seed", "3",
                     "--random-count", "1", "--horizon", "3"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out and "FAIL" not in out


def test_graph_dot_output():
    text = cli.graph_dot(fix_theta())
    assert text.startswith("digraph G") and "e2" in text
