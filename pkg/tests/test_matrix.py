"""
Tests for matrix and label validation
"""

import numpy as np
import pytest

from model_switching.errors import InvalidArgumentError
from model_switching.matrix import as_labels, as_matrix, check_width


def test_as_matrix_is_read_only_copy():
    """Test validation freezes a copy and leaves the caller's array writable"""
    source = np.arange(6, dtype=float).reshape(3, 2)
    matrix = as_matrix(source)
    assert not matrix.flags.writeable
    assert source.flags.writeable
    assert np.array_equal(matrix, source)
    assert as_matrix(matrix) is matrix


def test_as_matrix_accepts_nested_lists():
    """Test plain lists become float64 matrices"""
    matrix = as_matrix([[1, 2], [3, 4]])
    assert matrix.dtype == np.float64
    assert matrix.shape == (2, 2)


def test_as_matrix_rejects_non_finite():
    """Test NaN and infinity are rejected with their position"""
    with pytest.raises(InvalidArgumentError, match="row 1, column 0"):
        as_matrix([[1.0, 2.0], [np.nan, 3.0]])
    with pytest.raises(InvalidArgumentError):
        as_matrix([[np.inf]])


def test_as_matrix_rejects_wrong_rank():
    """Test one-dimensional input is not a matrix"""
    with pytest.raises(InvalidArgumentError, match="2-D"):
        as_matrix([1.0, 2.0])


def test_as_labels():
    """Test labels must be 0 or 1"""
    labels = as_labels([0, 1, 1, 0])
    assert labels.dtype == np.int64
    assert not labels.flags.writeable
    with pytest.raises(InvalidArgumentError):
        as_labels([0, 2])
    with pytest.raises(InvalidArgumentError):
        as_labels([[0, 1]])


def test_check_width_names_both_widths():
    """Test width mismatches report expected and actual column counts"""
    check_width(np.zeros((2, 3)), 3)
    with pytest.raises(InvalidArgumentError, match="expected 3 columns, got 4"):
        check_width(np.zeros((2, 4)), 3)
