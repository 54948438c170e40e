import json

import pytest

from helpers import config_path
from torres import bside, cli
from torres.errors import InvalidConfiguration
from torres.jobs import (dumps, generate_z, load_config, parse_config, parse_rational,
                         format_rational, serialize_config)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out else None
    return code, report, out.err


def test_inspect_f1(capsys):
    code, rep, _ = run(capsys, "inspect", config_path("f1.json"))
    assert code == 0
    assert rep["validate"] == {"projective": True, "spanning": True, "lattice_generating": True,
                               "kappa": [3, 2]}
    assert rep["gale_dual"] == [[-1, 0], [0, 1], [-1, 1], [1, -1]]
    assert rep["chamber"]["bind"] == [[1, 3], [1, 4], [2, 3], [2, 4]]
    assert rep["positive_basis"] == [[1, -1], [0, 1]]
    assert sorted(f["dF"] for f in rep["flags"]) == [-3, -1, 4]


def test_jk_commands(capsys):
    code, rep, _ = run(capsys, "jk", config_path("f1.json"))
    assert code == 0 and rep["value"] == "1"
    code, rep, _ = run(capsys, "jk", config_path("f1.json"), "--basic", "3,4", "--method", "basic")
    assert code == 0 and rep["value"] == "0"
    code, _, err = run(capsys, "jk", config_path("f1.json"), "--basic", "1,9")
    assert code == 2 and "--basic" in err


def test_jk_without_fraction(capsys):
    code, _, err = run(capsys, "jk", config_path("p1xp1.json"))
    assert code == 2 and "fraction" in err


def test_mp_single_and_series(capsys):
    code, rep, _ = run(capsys, "mp", config_path("f1.json"), "--lambda=1,-1")
    assert code == 0 and rep == {"lambda": [1, -1], "value": "-1"}
    code, rep, _ = run(capsys, "mp", config_path("p2.json"), "--series", "--bound", "12")
    assert code == 0
    assert [t["value"] for t in rep["terms"]] == ["1", "27", "729", "19683", "531441"]
    assert rep["domain"]["verdict"] == "inside"


def test_bside_p2(capsys):
    code, rep, _ = run(capsys, "bside", config_path("p2.json"))
    assert code == 0
    assert rep["verified"] and rep["found_count"] == rep["expected_count"] == 3
    assert abs(complex(*rep["value"]) - 2) < 1e-10


@pytest.mark.parametrize("name", ["p2.json", "f1.json", "p1xp1.json"])
def test_verify_fixtures(capsys, name):
    code, rep, _ = run(capsys, "verify", config_path(name))
    assert code == 0 and rep["pass"] is True
    assert rep["domain"]["verdict"] == "inside"


def test_verify_refuses_marginal(capsys):
    code, rep, _ = run(capsys, "verify", config_path("p1xp1_diagonal.json"))
    assert code == 2
    assert rep["refused"].startswith("domain verdict is marginal")
    assert "aside" not in rep
    code, rep, _ = run(capsys, "verify", config_path("p1xp1_diagonal.json"), "--force")
    assert code == 0 and rep["pass"] is True


def test_verify_mismatch(capsys):
    code, rep, _ = run(capsys, "verify", config_path("p2.json"), "--bound", "0", "--tol", "1e-12")
    assert code == 1 and rep["pass"] is False


def test_unverified_numeric_side(capsys, monkeypatch):
    real = bside.critical_points

    def short(*args, **kwargs):
        res = real(*args, **kwargs)
        res.points = res.points[:-1]
        res.found_count -= 1
        res.verified = False
        return res

    monkeypatch.setattr(bside, "critical_points", short)
    code, rep, _ = run(capsys, "bside", config_path("p2.json"))
    assert code == 3 and rep["verified"] is False
    code, rep, _ = run(capsys, "verify", config_path("p2.json"))
    assert code == 3


def test_missing_and_invalid_files(capsys, tmp_path):
    code, _, err = run(capsys, "inspect", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "inspect", str(bad))
    assert code == 2 and "InvalidConfiguration" in err
    nonproj = tmp_path / "nonproj.json"
    nonproj.write_text(json.dumps({"alphas": [[1], [-1]], "xi0": ["1"],
                                   "P": [{"coef": "1", "exps": [1, 0]}], "z": [0.1, 0.1]}))
    code, _, err = run(capsys, "jk", str(nonproj))
    assert code == 2 and "projective" in err


def test_near_singular_exit(capsys, tmp_path):
    path = tmp_path / "p2_singular.json"
    data = json.loads(open(config_path("p2.json")).read())
    data["z"] = [[1 / 3, 0.0]] * 3
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "bside", str(path))
    assert code == 3 and "kappa" in err


def test_parse_errors():
    base = json.loads(open(config_path("f1.json")).read())
    for field, value in [("alphas", [[1, 0], [1]]), ("xi0", ["1"]),
                         ("P", [{"coef": "1", "exps": [1, 0, 0, 0]}]),
                         ("z", [[0.1, 0.0]]), ("z", "oops")]:
        bad = dict(base, **{field: value})
        with pytest.raises(InvalidConfiguration):
            parse_config(bad)
    with pytest.raises(InvalidConfiguration, match="missing"):
        parse_config({"alphas": [[1]]})


def test_rational_formatting():
    assert parse_rational("3/6") == parse_rational(0.5)
    assert format_rational(parse_rational("-4/2")) == "-2"
    assert format_rational(parse_rational("2/3")) == "2/3"
    with pytest.raises(InvalidConfiguration):
        parse_rational(True)


@pytest.mark.parametrize("name", ["p2.json", "f1.json", "p1xp1.json", "p1xp1_diagonal.json"])
def test_serialization_roundtrip(name):
    cfg = load_config(config_path(name))
    once = serialize_config(cfg)
    twice = serialize_config(parse_config(json.loads(once)))
    assert once == twice
    assert generate_z(parse_config(json.loads(once))) == generate_z(cfg)


def test_seeded_z_generation():
    cfg = load_config(config_path("f1.json"))
    assert generate_z(cfg) == generate_z(load_config(config_path("f1.json")))
    cfg.seed = 1
    other = generate_z(cfg)
    assert other != generate_z(load_config(config_path("f1.json")))
    assert [abs(x) for x in other] == pytest.approx([abs(x) for x in generate_z(load_config(config_path("f1.json")))])


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": [1.5, "x"]}) == '{\n  "b": 1,\n  "a": [\n    1.5,\n    "x"\n  ]\n}\n'
