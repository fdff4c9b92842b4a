import numpy as np
import pytest

from gwlindley.datasets import DatasetError, load_dataset, parse_values
from gwlindley.samples import LifetimeSample, as_sample


def test_builtin_aarset():
    ds = load_dataset("aarset")
    assert len(ds) == 50
    assert ds.values.sorted_values[0] == 0.1
    assert ds.values.sorted_values[-1] == 86.0
    assert 15.0 in ds.values.values and 75.0 not in ds.values.values


def test_corrected_aarset_swaps_the_suspect_value():
    ds = load_dataset("aarset", corrected_aarset=True)
    assert 75.0 in ds.values.values and 15.0 not in ds.values.values
    assert "75" in ds.provenance


def test_builtin_cantareira():
    ds = load_dataset("Cantareira")
    assert len(ds) == 83
    assert 144.9 in ds.values.values


def test_file_with_negative_value_names_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("# header\n1, 2, 3\n4 -3\n")
    with pytest.raises(DatasetError, match="line 3"):
        load_dataset(str(p))


def test_file_parsing_separators_and_comments(tmp_path):
    p = tmp_path / "ok.csv"
    p.write_text("# lifetimes\n1.5,2.5;3\n\n  4e1  \n")
    ds = load_dataset(str(p))
    assert ds.name == "ok"
    assert list(ds.values) == [1.5, 2.5, 3.0, 40.0]


def test_parse_errors():
    with pytest.raises(DatasetError, match="line 2"):
        parse_values("1\nabc\n")
    with pytest.raises(DatasetError, match="no observations"):
        parse_values("# nothing\n")
    with pytest.raises(DatasetError, match="no such"):
        load_dataset("does-not-exist")


def test_sample_validation_and_cache():
    s = LifetimeSample([3.0, 1.0, 2.0, 2.0])
    assert list(s.sorted_values) == [1.0, 2.0, 2.0, 3.0]
    assert list(s.tie_index) == [2]
    assert np.allclose(s.log_values, np.log([1.0, 2.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        s.values[0] = 5.0
    with pytest.raises(ValueError, match="observation 1"):
        LifetimeSample([1.0, 0.0])
    with pytest.raises(ValueError):
        LifetimeSample([])
    assert as_sample(s) is s
    assert list(s.scaled(2.0).sorted_values) == [2.0, 4.0, 4.0, 6.0]
