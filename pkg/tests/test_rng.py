"""
Tests for seeded splittable streams - determinism, independence and ranges
"""

import numpy as np
import pytest

from model_switching.errors import InvalidArgumentError
from model_switching.rng import (
    SeededRng,
    next_normal,
    next_uniform,
    rng_from_seed,
    rng_split,
    splitmix64,
)


def test_splitmix64_reference_value():
    """Test the mixing function against its published first output for state 0"""
    _, out = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF


def test_same_seed_same_sequence():
    """Test two roots with one seed produce identical draws"""
    a, b = rng_from_seed(42), rng_from_seed(42)
    assert [a.next_u64() for _ in range(20)] == [b.next_u64() for _ in range(20)]


def test_different_seeds_differ():
    """Test different seeds give different first draws"""
    assert rng_from_seed(1).next_u64() != rng_from_seed(2).next_u64()


def test_split_does_not_advance_parent():
    """Test splitting leaves the parent's state untouched"""
    parent = rng_from_seed(42)
    before = parent.state
    parent.split("tree/3")
    assert parent.state == before


def test_split_depends_only_on_seed_and_path():
    """Test a child is the same however the parent was advanced"""
    fresh = rng_from_seed(42)
    used = rng_from_seed(42)
    for _ in range(100):
        used.next_u64()
    assert fresh.split("bootstrap/0").state == used.split("bootstrap/0").state


def test_nested_split_joins_labels():
    """Test split('a').split('b') is the stream labelled 'a/b'"""
    root = rng_from_seed(9)
    assert root.split("a").split("b").state == root.split("a/b").state
    assert root.split("a").split("b").stream_label == "a/b"


def test_sibling_streams_differ():
    """Test different labels give different streams"""
    root = rng_from_seed(42)
    draws = {root.split(f"tree/{i}").next_u64() for i in range(50)}
    assert len(draws) == 50


def test_module_level_helpers():
    """Test the free functions mirror the methods"""
    a = rng_split(rng_from_seed(3), "x")
    b = rng_from_seed(3).split("x")
    assert next_uniform(a) == b.next_uniform()
    assert next_normal(a) == b.next_normal()


def test_invalid_seeds_rejected():
    """Test seeds outside [0, 2^64) or of the wrong type are rejected"""
    for seed in (-1, 2 ** 64, True, 1.5, "42"):
        with pytest.raises(InvalidArgumentError):
            SeededRng(seed)


def test_empty_label_rejected():
    """Test splitting needs a nonempty label"""
    with pytest.raises(InvalidArgumentError):
        rng_from_seed(1).split("")


def test_uniform_range_and_mean():
    """Test uniforms lie in [0, 1) with mean near one half"""
    values = rng_from_seed(42).uniforms(20000)
    assert values.min() >= 0.0
    assert values.max() < 1.0
    assert abs(values.mean() - 0.5) < 0.01


def test_bulk_uniforms_match_single_draws():
    """Test uniforms(n) equals n calls of next_uniform"""
    a, b = rng_from_seed(5), rng_from_seed(5)
    singles = [a.next_uniform() for _ in range(33)]
    assert np.array_equal(b.uniforms(33), np.array(singles))


def test_bulk_normals_match_single_draws():
    """Test normals(n) equals n calls of next_normal, cached spare included"""
    a, b = rng_from_seed(8), rng_from_seed(8)
    singles = [a.next_normal() for _ in range(12)]
    first = b.next_normal()
    bulk = b.normals(7)
    rest = [b.next_normal() for _ in range(4)]
    assert [first, *bulk.tolist(), *rest] == singles


def test_normal_moments():
    """Test normals have mean near 0 and standard deviation near 1"""
    values = rng_from_seed(42).normals(20001)
    assert values.size == 20001
    assert np.all(np.isfinite(values))
    assert abs(values.mean()) < 0.03
    assert abs(values.std() - 1.0) < 0.03


def test_next_below_bounds():
    """Test bounded integers stay in range and hit every value"""
    rng = rng_from_seed(42)
    values = [rng.next_below(7) for _ in range(2000)]
    assert set(values) == set(range(7))
    with pytest.raises(InvalidArgumentError):
        rng.next_below(0)


def test_integers_with_replacement():
    """Test integers(bound, size) stays in range"""
    values = rng_from_seed(4).integers(10, 500)
    assert values.shape == (500,)
    assert values.min() >= 0 and values.max() < 10


def test_sample_without_replacement():
    """Test sample draws distinct values from the range"""
    drawn = rng_from_seed(42).sample(30, 12)
    assert len(set(drawn.tolist())) == 12
    assert all(0 <= v < 30 for v in drawn)
    with pytest.raises(InvalidArgumentError):
        rng_from_seed(42).sample(3, 4)


def test_permutation_is_permutation():
    """Test permutation returns every index exactly once"""
    perm = rng_from_seed(42).permutation(100)
    assert sorted(perm.tolist()) == list(range(100))
    assert perm.tolist() != list(range(100))
