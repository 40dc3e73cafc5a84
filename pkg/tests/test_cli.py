import numpy as np
import pytest

from rmpir import dbfile
from rmpir.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_reference(capsys):
    code, out, _ = run(capsys, "params", "--r", "1", "--t", "1", "--a", "1", "--b", "1")
    assert code == 0
    assert "m=4 n=16 k=5 r'=0 r_e=1" in out and "rho=6 L=6 S=5" in out
    assert "rate 3/8" in out


def test_params_infeasible(capsys):
    code, _, err = run(capsys, "params", "--r", "2", "--t", "3", "--a", "0", "--b", "0")
    assert code == 2 and "decodability" in err


def test_params_small(capsys):
    code, out, _ = run(capsys, "params", "--r", "0", "--t", "1", "--a", "0", "--b", "1")
    assert code == 0 and "m=3" in out


@pytest.fixture
def db(tmp_path, capsys):
    path = tmp_path / "db.bin"
    assert main(["gen", "--files", "3", "--seed", "11", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def test_gen_roundtrip(db):
    data = dbfile.read(db)
    assert data.shape == (3, 6, 5)
    again = db.with_name("again.bin")
    main(["gen", "--files", "3", "--seed", "11", "--out", str(again)])
    assert np.array_equal(dbfile.read(again), data)


def test_retrieve_prints_recovery_table(capsys, db, tmp_path):
    out_path = tmp_path / "file.bin"
    code, out, _ = run(capsys, "retrieve", "--db", str(db), "--file", "2", "--byz", "7", "--unresp", "12",
                       "--seed", "5", "--out", str(out_path))
    assert code == 0 and "exact match" in out
    assert "round 1: erased 12; recovered 3: a1[z4] a2[z4] a3[z4]" in out
    table = out.split("recovery round per coefficient:\n")[1].splitlines()[:7]
    assert table[1].split() == ["1", "5", "2", "2", "2", "1"]
    assert table[6].split() == ["6", "5", "4", "4", "4", "3"]
    assert "rate 30/80 = 3/8" in out
    assert np.array_equal(dbfile.read(out_path)[0], dbfile.read(db)[1])


def test_retrieve_is_deterministic(capsys, db):
    args = ["retrieve", "--db", str(db), "--file", "1", "--byz", "3", "--unresp", "9", "--seed", "18446744073709551615"]
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_retrieve_budget_rejected(capsys, db):
    code, _, err = run(capsys, "retrieve", "--db", str(db), "--file", "1", "--byz", "1,2")
    assert code == 2 and "exceed" in err


def test_retrieve_exhaustive(capsys, db):
    code, out, _ = run(capsys, "retrieve", "--db", str(db), "--file", "3", "--adversary", "exhaustive")
    assert code == 0 and "480/480" in out


def test_retrieve_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"nonsense")
    code, _, err = run(capsys, "retrieve", "--db", str(bad), "--file", "1")
    assert code == 5 and "malformed" in err


def test_retrieve_no_plan(capsys, tmp_path):
    # r=2, t=1, a=2, b=1 is feasible, but the bounded planner search gives up
    path = tmp_path / "db.bin"
    main(["gen", "--r", "2", "--a", "2", "--files", "2", "--out", str(path)])
    capsys.readouterr()
    code, _, err = run(capsys, "retrieve", "--r", "2", "--a", "2", "--db", str(path), "--file", "1",
                         "--plan-budget", "20")
    assert code == 4 and "no query plan" in err


def test_rates(capsys):
    code, out, _ = run(capsys, "rates", "--custom", "n=16,t=1,a=1,b=1")
    assert code == 0
    assert out.splitlines()[1] == "16,4,1,5,1,1,1,3,8,0.375000,0.500000,0.500000,1"
    code, out, _ = run(capsys, "rates", "--custom", "m=6..5")
    assert out.count("\n") == 1
    code, out, _ = run(capsys, "rates", "--panel", "left")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    for row in rows:
        if row[4:7] == ["1", "1", "0"]:
            assert row[9] == row[10]


def test_bad_seed_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "--seed", str(2**64), "--out", "x"])


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0 and "FAIL" not in out
