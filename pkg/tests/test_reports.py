import numpy as np
import pytest

from ttolab.reports import canonical_json, csv_table, format_cell, output_dir


def test_canonical_json_is_stable():
    payload = {"b": 1.0 / 3.0, "a": [1, 2], "c": complex(1, -2)}
    first = canonical_json(payload)
    second = canonical_json({"c": complex(1, -2), "a": [1, 2], "b": 1.0 / 3.0})
    assert first == second
    assert first.endswith("\n")
    # keys sorted
    assert first.index('"a"') < first.index('"b"') < first.index('"c"')


def test_canonical_json_value_handling():
    text = canonical_json({
        "arr": np.array([1.0, 2.0]),
        "nan": float("nan"),
        "flag": np.bool_(True),
        "count": np.int64(3),
    })
    assert '"nan": null' in text
    assert '"flag": true' in text
    assert '"count": 3' in text


def test_canonical_json_rejects_unknown_types():
    with pytest.raises(TypeError):
        canonical_json({"obj": object()})


def test_float_precision_survives_roundtrip():
    import json

    x = 0.1 + 0.2  # not exactly 0.3
    back = json.loads(canonical_json({"x": x}))
    assert back["x"] == x


def test_csv_table_layout():
    text = csv_table(["n", "value"], [[1, 0.5], [2, complex(0, 1)]])
    lines = text.strip().split("\r\n") if "\r\n" in text else text.strip().split("\n")
    assert lines[0] == "n,value"
    assert lines[1].startswith("1,")
    assert format_cell(True) == "true"


def test_output_dir_priority(tmp_path, monkeypatch):
    monkeypatch.delenv("TTOLAB_OUTPUT_DIR", raising=False)
    assert output_dir(str(tmp_path / "flag"), "cfg").name == "flag"
    monkeypatch.setenv("TTOLAB_OUTPUT_DIR", str(tmp_path / "env"))
    assert output_dir(None, "cfg").name == "env"
    monkeypatch.delenv("TTOLAB_OUTPUT_DIR")
    assert output_dir(None, str(tmp_path / "cfg")).name == "cfg"
