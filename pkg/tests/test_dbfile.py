import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmpir import dbfile
from rmpir.errors import MalformedDatabase


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 6), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_roundtrip(M, L, k, seed):
    data = np.random.default_rng(seed).integers(0, 2, (M, L, k), dtype=np.uint8)
    blob = dbfile.dumps(data)
    assert len(blob) == dbfile.HEADER.size + M * L * ((k + 7) // 8)
    assert np.array_equal(dbfile.loads(blob), data)


def test_header_layout():
    blob = dbfile.dumps(np.ones((2, 3, 9), dtype=np.uint8))
    assert blob[:6] == b"RMPIR1"
    assert blob[6:10] == (2).to_bytes(4, "little")
    assert blob[14:18] == (9).to_bytes(4, "little")


def test_malformed_inputs(tmp_path):
    good = dbfile.dumps(np.zeros((1, 2, 3), dtype=np.uint8))
    with pytest.raises(MalformedDatabase):
        dbfile.loads(b"RMPIR")
    with pytest.raises(MalformedDatabase):
        dbfile.loads(b"XXXXXX" + good[6:])
    with pytest.raises(MalformedDatabase):
        dbfile.loads(good + b"\x00")
    with pytest.raises(MalformedDatabase):
        dbfile.read(tmp_path / "missing.bin")


def test_file_roundtrip(tmp_path):
    data = np.random.default_rng(1).integers(0, 2, (3, 6, 5), dtype=np.uint8)
    dbfile.write(tmp_path / "db.bin", data)
    assert np.array_equal(dbfile.read(tmp_path / "db.bin"), data)
