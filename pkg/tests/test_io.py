import json

import numpy as np
import pytest

from conftest import random_metric
from kcenter_outliers import ContractViolation, OutlierParams, build_coreset, synth
from kcenter_outliers import io


def test_points_roundtrip_exact(tmp_path):
    X = np.random.default_rng(0).normal(size=(20, 3)) * 1e3
    path = tmp_path / "p.csv"
    io.write_points(path, X)
    np.testing.assert_array_equal(io.read_points(path).coords, X)


def test_single_point_file(tmp_path):
    path = tmp_path / "p.csv"
    io.write_points(path, [[1.0, 2.0]])
    assert io.read_points(path).coords.shape == (1, 2)


def test_metric_roundtrip(tmp_path):
    M = random_metric(7, np.random.default_rng(1))
    path = tmp_path / "m.txt"
    io.write_metric(path, M)
    assert path.read_text().splitlines()[0] == "7"
    np.testing.assert_array_equal(io.read_dataset(path, "metric").matrix, M)


def test_bad_files(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\nx,y\n")
    with pytest.raises(ContractViolation):
        io.read_points(bad)
    m = tmp_path / "m.txt"
    m.write_text("3\n0 1\n1 0\n")
    with pytest.raises(ContractViolation):
        io.read_metric(m)
    with pytest.raises(ContractViolation):
        io.read_dataset(bad, "parquet")


def test_coreset_files(tmp_path):
    inst = synth(100, 2, 2, 4, seed=0)
    cs = build_coreset(inst.dataset, OutlierParams(k=2, z=4), l=3)
    path = tmp_path / "cs.csv"
    io.atomic_write(path, io.format_coreset(cs))
    ids, w = io.read_coreset(path)
    np.testing.assert_array_equal(ids, cs.points)
    np.testing.assert_array_equal(w, cs.weights)
    assert io.sidecar_path(path).name == "cs.meta.json"
    rep = io.format_rep_map(cs).splitlines()
    assert rep[0] == "id,rep" and len(rep) == 101
    wrong = tmp_path / "w.csv"
    wrong.write_text("a,b\n1,2\n")
    with pytest.raises(ContractViolation):
        io.read_coreset(wrong)


def test_centers_formats(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"centers": [3, 1]}))
    assert io.read_centers(a).tolist() == [3, 1]
    b = tmp_path / "b.txt"
    b.write_text("4\n2\n")
    assert io.read_centers(b).tolist() == [4, 2]
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"radius": 1}))
    with pytest.raises(ContractViolation):
        io.read_centers(c)


def test_atomic_write_leaves_no_temp_on_failure(tmp_path):
    class Boom:
        def __str__(self):
            raise RuntimeError

    with pytest.raises(TypeError):
        io.atomic_write(tmp_path / "x.txt", Boom())
    assert list(tmp_path.iterdir()) == []


def test_json_is_sorted():
    assert io.dump_json({"b": 1, "a": 2}).index('"a"') < io.dump_json({"b": 1, "a": 2}).index('"b"')
