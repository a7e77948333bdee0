import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from sepmatch.losses import LossKind
from sepmatch.output import COLUMNS, SCHEMA_VERSION, csv_text, fmt_value, json_text, write_svg

GOLDEN = Path(__file__).parent / "golden"


def test_columns_match_golden():
    golden = json.loads((GOLDEN / "columns.json").read_text())
    assert {k: list(v) for k, v in COLUMNS.items()} == golden


def test_float_format_nine_significant():
    assert fmt_value(1 / 3) == "0.333333333"
    assert fmt_value(123456789.123) == "123456789"
    assert fmt_value(2.5e-7) == "2.5e-07"
    assert fmt_value(np.float64(30.0)) == "30"
    assert fmt_value(np.int64(4)) == "4"
    assert fmt_value(LossKind.MCL) == "MCL"
    assert fmt_value(True) == "true"


def test_csv_header_and_order():
    rows = [{"target": 1, "prediction": 0, "cost": 0.1, "extra": "ignored"}]
    text = csv_text("assign", rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed == [["target", "prediction", "cost"], ["1", "0", "0.1"]]
    with pytest.raises(KeyError):
        csv_text("assign", [{"target": 1}])


def test_json_envelope():
    doc = json.loads(json_text("assign", plan=np.eye(2), method=LossKind.SINKPIT, ok=np.bool_(True)))
    assert list(doc)[:2] == ["schema_version", "command"]
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["plan"] == [[1.0, 0.0], [0.0, 1.0]]
    assert doc["method"] == "SINKPIT" and doc["ok"] is True


def test_svg_written(tmp_path):
    path = tmp_path / "c.svg"
    write_svg(path, {"a": ([1, 2, 4], [1, 4, 16]), "b": ([1, 2, 4], [1, 2, 4])}, "n", "t",
              loglog=True, title="demo")
    text = path.read_text()
    assert text.lstrip().startswith("<?xml") and "<svg" in text
