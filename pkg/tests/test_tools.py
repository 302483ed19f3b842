import math

import pytest

from lightlike_solitons.errors import DescriptorError
from lightlike_solitons.tools.descriptor_reader import read_descriptor_text
from lightlike_solitons.tools.error_metrics import summarize_errors


# ===== error metrics =====


def test_summarize_errors():
    summary = summarize_errors([1e-3, -2e-3, math.nan, 0.0], 1.5e-3)
    assert summary.count_samples == 4
    assert summary.count_within == 2
    assert summary.count_exceeding == 2
    assert summary.count_nonfinite == 1
    assert summary.pass_percentage == 50.0
    assert summary.max == 2e-3
    assert summary.min == 0.0
    assert not summary.passed


def test_summarize_passing_and_empty():
    assert summarize_errors([0.0, -1e-12], 1e-12).passed
    empty = summarize_errors([], 1.0)
    assert not empty.passed
    assert empty.max is None
    assert empty.pass_percentage == 0.0


# ===== descriptor reader =====


def test_inline_descriptor():
    assert read_descriptor_text('  {"kind": "type_i"} ') == '{"kind": "type_i"}'


def test_descriptor_file(tmp_path):
    path = tmp_path / "d.json"
    path.write_text('{"kind": "type_ii"}', encoding="utf-8")
    assert read_descriptor_text(f"@{path}") == '{"kind": "type_ii"}'


@pytest.mark.parametrize("value", ["", "   ", "@no/such/file.json"])
def test_unreadable_descriptor(value):
    with pytest.raises(DescriptorError):
        read_descriptor_text(value)
