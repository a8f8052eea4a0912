import json

import pytest

from scx.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, EXIT_PRE, run


@pytest.fixture
def build(tmp_path):
    def _build(name, *flags):
        path = tmp_path / f"{name}.json"
        assert run(["build", *flags, "--out", str(path)]) == EXIT_OK
        return str(path)

    return _build


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_homology_of_sphere(build, capsys):
    path = build("b3", "--kind", "boundary", "--n", "3")
    code, data = call(capsys, "homology", "--input", path, "--bound", "3")
    assert code == EXIT_OK
    assert data["betti"] == [1, 0, 1, 0]
    assert data["sphere_dimension"] == 2


def test_check_bicat_flat_triangle_fails(build, capsys):
    path = build("f2", "--kind", "simplex", "--n", "2", "--decorate", "flat")
    code, data = call(capsys, "check-bicat", "--input", path, "--bound", "3")
    assert code == EXIT_CHECK
    assert data["witness"]["generator"] == "A(2,1)"


def test_check_bicat_point_passes(build, capsys):
    path = build("pt", "--kind", "simplex", "--n", "0", "--decorate", "sharp")
    code, data = call(capsys, "check-bicat", "--input", path, "--bound", "3")
    assert code == EXIT_OK and data["status"] == "SEMI-DECIDED-YES"


def test_verify_suite(capsys):
    code, data = call(capsys, "verify", "coherent-cubes")
    assert code == EXIT_OK
    assert data["ok"]


def test_reports_are_byte_identical(build, capsys):
    path = build("b2", "--kind", "boundary", "--n", "2")
    outs = []
    for _ in range(2):
        run(["subdivide", "--input", path])
        outs.append(capsys.readouterr().out)
        run(["verify", "colk"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_malformed_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["homology", "--input", str(bad)]) == EXIT_INPUT
    missing = tmp_path / "absent.json"
    assert run(["homology", "--input", str(missing)]) == EXIT_INPUT


def test_bad_vertex_is_a_precondition_error(build):
    path = build("d2", "--kind", "simplex", "--n", "2")
    assert run(["hom", "--input", path, "--from", "0", "--to", "nope"]) == EXIT_PRE


def test_hom_scaled(build, capsys):
    path = build("s2", "--kind", "simplex", "--n", "2", "--decorate", "sharp")
    code, data = call(capsys, "hom", "--base", path, "--from", "0", "--to", "2", "--scaled")
    assert code == EXIT_OK
    assert data["marked"]


def test_certify_filtration(capsys):
    code, data = call(capsys, "certify-filtration", "--family", "swww", "--n", "3", "--i", "1")
    assert code == EXIT_OK and data["ok"]


def test_segal_on_interval(build, capsys):
    path = build("d1", "--kind", "simplex", "--n", "1")
    code, data = call(capsys, "segal", "--input", path)
    assert code == EXIT_OK
    assert data["category_object"]["status"] == "YES"


def test_free_cat(capsys):
    code, data = call(capsys, "free-cat", "--free", "1", "--alphabet", "abc", "--from", "0", "--to", "1")
    assert code == EXIT_OK
    assert data["homs"]["0->1"]["count"] == 3


def test_jt_check(build, capsys):
    path = build("d1", "--kind", "simplex", "--n", "1")
    code, data = call(capsys, "jt-check", "--input", path, "--n", "1")
    assert code == EXIT_OK
    assert all(f["grade"] == "witness" for f in data["fibers"].values())


def test_text_format_and_out_file(build, tmp_path, capsys):
    path = build("d1", "--kind", "simplex", "--n", "1")
    out = tmp_path / "report.txt"
    assert run(["homology", "--input", path, "--format", "text", "--out", str(out)]) == EXIT_OK
    assert "betti" in out.read_text()
    assert capsys.readouterr().out == ""
