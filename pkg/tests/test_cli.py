import json

import pytest

from grchi.cli import main
from grchi.poset import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_chi_generic_24(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out = run(capsys, "chi-generic", "--k", "2", "--n", "4", "--out", str(out_file))
    assert code == 0
    assert "6 + 12t + 14t^2 + 8t^3 + 2t^4" in out
    assert "6 - 4t + 4t^2 - 2t^3 + 2t^4" in out
    rep = json.loads(out_file.read_text())
    assert [rep["counts"][str(d)] for d in range(4, 12)] == [8, 16, 32, 62, 114, 198, 326, 512]
    assert "versions" in rep


def test_chi_generic_projective_plane(capsys):
    code, out = run(capsys, "chi-generic", "--k", "1", "--n", "3", "--d", "4")
    assert code == 0
    assert "bounded-region count for projective space: ok" in out


def test_chi_schubert_reports_unknown(capsys):
    code, out = run(capsys, "chi-schubert", "--k", "2", "--n", "5")
    assert "Unknown" in out
    code, out = run(capsys, "chi-schubert", "--k", "2", "--n", "4")
    assert code == 0
    for v in ("4", "11", "26", "55", "106", "189", "316", "501"):
        assert v in out


def test_poset_command(capsys):
    code, out = run(capsys, "poset", str(fixture_path("six_pluecker.json")))
    assert code == 0
    assert "chi of the complement = 0" in out


def test_mldeg_fixture(capsys):
    code, out = run(capsys, "mldeg", str(fixture_path("cube_lines.json")), "--seed", "3", "--expect", "4")
    assert code == 0
    code, _ = run(capsys, "mldeg", str(fixture_path("cube_lines.json")), "--seed", "3", "--expect", "5",
                  "--no-confirm")
    assert code != 0


def test_regions_single_hyperplane(capsys):
    code, out = run(capsys, "regions", str(fixture_path("single_hyperplane_gr13.json")))
    assert code == 0
    assert "2 regions, total chi 2" in out


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["chi-generic", "--k", "3", "--n", "3"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["chi-generic", "--k", "2"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_repro_only_fast_criterion(capsys):
    code, out = run(capsys, "repro", "--only", "1")
    assert code == 0
    assert "PASS" in out
