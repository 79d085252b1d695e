"""End-to-end tests of the command-line interface."""

import json

import pytest

from terracini.cli import _json_safe, main, parse_config
from terracini.errors import InvariantViolation, ParseError

GENERIC_P14 = {
    "factors": [1, 1, 1, 1],
    "points": [
        {"coords": [["1", "0"], ["1", "0"], ["1", "0"], ["1", "0"]], "multiplicity": 2},
        {"coords": [["0", "1"], ["0", "1"], ["0", "1"], ["0", "1"]], "multiplicity": 2},
        {"coords": [["1", "1"], ["1", "2"], ["1", "3"], ["1", "4"]], "multiplicity": 2},
    ],
}


def _write(tmp_path, obj, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_config_valid_scheme():
    space, scheme, degree, r = parse_config(
        b'{"factors":[1,1],"points":[{"coords":[["1","0"],["0","1"]],"multiplicity":2}]}'
    )
    assert space.factor_dims == (1, 1)
    assert scheme.terms[0][1] == 2
    assert degree is None and r is None


def test_parse_config_rational_coordinates_cleared():
    _, scheme, _, _ = parse_config(
        b'{"factors":[1],"points":[{"coords":[["1/2","1/3"]],"multiplicity":1}]}'
    )
    assert scheme.terms[0][0].coords == ((3, 2),)


def test_parse_config_rejects_zero_vector_and_duplicates():
    with pytest.raises(InvariantViolation):
        parse_config(b'{"factors":[1],"points":[{"coords":[["0","0"]],"multiplicity":1}]}')
    dup = (
        b'{"factors":[1],"points":['
        b'{"coords":[["1","2"]],"multiplicity":1},'
        b'{"coords":[["2","4"]],"multiplicity":2}]}'
    )
    with pytest.raises(InvariantViolation):
        parse_config(dup)


def test_parse_config_rejects_unknown_fields_and_bad_shapes():
    with pytest.raises(ParseError):
        parse_config(b'{"factors":[1],"oops":1}')
    with pytest.raises(ParseError):
        parse_config(b'{"factors":[]}')
    with pytest.raises(ParseError):
        parse_config(b'{"factors":[1],"multidegree":[1,1]}')
    with pytest.raises(ParseError):
        parse_config(b"not json")
    with pytest.raises(ParseError):
        parse_config(b'{"factors":[1],"points":[{"coords":[["1","0"]]}]}')


def test_defect_command_generic_triple(tmp_path, capsys):
    code, out, _ = _run(capsys, ["defect", "--input", _write(tmp_path, GENERIC_P14)])
    assert code == 0
    rep = json.loads(out)
    assert rep["cohomology"]["h0"] == 2
    assert rep["cohomology"]["delta"] == 1
    assert rep["membership"]["in_T"] is True
    assert rep["minimal_shape"] == [1, 1, 1, 1]
    assert rep["pattern"]["kind"] == "P14_MINIMAL"


def test_defect_command_restricted_degree(tmp_path, capsys):
    job = {
        "factors": [2, 1],
        "multidegree": [1, 0],
        "points": [{"coords": [["1", "1", "1"], ["1", "2"]], "multiplicity": 2}],
    }
    code, out, _ = _run(capsys, ["defect", "--input", _write(tmp_path, job)])
    assert code == 0
    rep = json.loads(out)
    assert rep["degree"] == [1, 0]
    assert rep["cohomology"]["h0"] == 0
    assert rep["membership"] is None


def test_defect_command_duplicate_points_exit_2(tmp_path, capsys):
    job = {
        "factors": [1],
        "points": [
            {"coords": [["1", "2"]], "multiplicity": 2},
            {"coords": [["2", "4"]], "multiplicity": 2},
        ],
    }
    code, out, err = _run(capsys, ["defect", "--input", _write(tmp_path, job)])
    assert code == 2
    assert "duplicate" in err


def test_classify_command(tmp_path, capsys):
    code, out, _ = _run(capsys, ["classify", "--input", _write(tmp_path, GENERIC_P14)])
    assert code == 0
    rep = json.loads(out)
    assert rep["predicted_in_T"] is True
    assert rep["agreement"] is True


def test_secant_command(tmp_path, capsys):
    code, out, _ = _run(
        capsys, ["secant", "--input", _write(tmp_path, {"factors": [1, 1, 1], "r": 3})]
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["estimate"]["estimated_dim"] == 7
    assert rep["estimate"]["defect"] == 0


def test_search_defect_command(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["search", "--input", _write(tmp_path, {"n": 3, "r": 2}), "--trials", "4"],
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["report"]["best_delta"] == 3
    assert rep["counterexample_found"] is False


def test_search_classify_command(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        [
            "search",
            "--input",
            _write(tmp_path, {"n": 3, "mode": "classify"}),
            "--trials",
            "3",
        ],
    )
    assert code == 0
    assert json.loads(out)["disagreements"] == []


def test_search_rejects_bad_mode_and_missing_r(tmp_path, capsys):
    code, _, err = _run(
        capsys, ["search", "--input", _write(tmp_path, {"n": 3, "mode": "bogus"})]
    )
    assert code == 2 and "mode" in err
    code, _, err = _run(capsys, ["search", "--input", _write(tmp_path, {"n": 3})])
    assert code == 2 and "$.r" in err


def test_verify_command_all_pass(capsys):
    code, out, _ = _run(capsys, ["verify-paper"])
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] is True
    assert all(c["pass"] for c in rep["checks"])
    assert len(rep["checks"]) >= 25


def test_verify_table_format(capsys):
    code, out, _ = _run(capsys, ["verify-paper", "--format", "table"])
    assert code == 0
    assert "PASS" in out and "FAIL " not in out


def test_output_is_byte_deterministic(tmp_path, capsys):
    path = _write(tmp_path, {"factors": [1, 1, 1], "r": 3})
    _, out1, _ = _run(capsys, ["secant", "--input", path, "--seed", "5"])
    _, out2, _ = _run(capsys, ["secant", "--input", path, "--seed", "5"])
    assert out1 == out2


def test_primes_flag_validation(tmp_path, capsys):
    path = _write(tmp_path, {"factors": [1, 1], "r": 2})
    code, _, err = _run(capsys, ["secant", "--input", path, "--primes", "32749,65521"])
    assert code == 2 and "2^15" in err
    code, _, err = _run(capsys, ["secant", "--input", path, "--primes", "65520"])
    assert code == 2
    code, _, _ = _run(capsys, ["secant", "--input", path, "--primes", "65537,1048583"])
    assert code == 0


def test_missing_input_and_unreadable_file(capsys):
    code, _, err = _run(capsys, ["defect"])
    assert code == 2
    code, _, err = _run(capsys, ["defect", "--input", "/nonexistent/file.json"])
    assert code == 2


def test_json_safe_serializes_large_integers_as_strings():
    assert _json_safe(2**60) == str(2**60)
    assert _json_safe(-(2**60)) == str(-(2**60))
    assert _json_safe(12) == 12
    assert _json_safe({"a": [2**60, 1]}) == {"a": [str(2**60), 1]}
    assert _json_safe(True) is True


def test_table_format_defect(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["defect", "--input", _write(tmp_path, GENERIC_P14), "--format", "table"],
    )
    assert code == 0
    assert "cohomology.h0" in out
