import json

import numpy as np

from maxrigid.io import read_json, read_table, to_jsonable, write_json, write_table


def test_jsonable_conversions():
    out = to_jsonable({"a": np.float64(1.5), "b": np.arange(3), "c": (np.bool_(True), np.nan, -np.inf), "z": 1 + 2j})
    assert out == {"a": 1.5, "b": [0, 1, 2], "c": [True, "nan", "-inf"], "z": [1.0, 2.0]}
    json.dumps(out)


def test_json_is_sorted_and_stable(tmp_path):
    p1 = write_json(tmp_path / "a.json", {"b": 1, "a": [0.1, 2]})
    p2 = write_json(tmp_path / "b.json", {"a": [0.1, 2], "b": 1})
    assert p1.read_bytes() == p2.read_bytes()
    assert read_json(p1) == {"a": [0.1, 2], "b": 1}


def test_table_round_trip_with_sidecar(tmp_path):
    x = 1 / 3
    csv_path, side = write_table(tmp_path / "t.csv", ("n", "e", "tag"), [(1, x, "u"), (2, x / 7, "v")],
                                 {"e": "variance"}, "demo")
    back = read_table(csv_path)
    assert back["e"][0] == x and back["tag"] == ["u", "v"]
    meta = read_json(side)
    assert meta["n_rows"] == 2 and meta["columns"][1] == {"name": "e", "unit": "variance"}
