import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curated import NON_SKEW, rho_by_halving
from unit_fibers.errors import InvalidArgumentError
from unit_fibers.fibration import standard_fiber
from unit_fibers.geometry import linked
from unit_fibers.linalg import AffineSubspace
from unit_fibers.sampling import ball_points, rng
from unit_fibers.skew import (
    fiber_to_skew_plane,
    hurwitz_radon,
    skew,
    skew_fibration_exists,
    unit_fibration_dimension_admissible,
)

NS = (1, 3, 7)


def line(base, direction):
    return AffineSubspace(base, [direction])


def test_fiber_to_skew_plane_examples():
    q0 = fiber_to_skew_plane(standard_fiber(1, [0, 0]))
    np.testing.assert_array_equal(q0.base, [0, 0, 0])
    np.testing.assert_allclose(np.abs(q0.frame), [[0, 0, 1]])
    q_half = fiber_to_skew_plane(standard_fiber(1, [0.5, 0]))
    np.testing.assert_allclose(q_half.base, [0.5, 0, 0])
    np.testing.assert_allclose(q_half.frame[0], np.array([0, 0.5, 1]) / np.sqrt(1.25))


def test_skew_examples():
    z_axis = line([0, 0, 0], [0, 0, 1])
    assert skew(z_axis, line([0.5, 0, 0], [0, 0.5, 1]))
    assert not skew(z_axis, line([1, 0, 0], [0, 0, 1]))
    assert not skew(z_axis, line([0, 0, 0], [1, 0, 0]))
    with pytest.raises(InvalidArgumentError):
        skew(z_axis, AffineSubspace([0, 0, 0], [[1, 0, 0], [0, 1, 0]]))


@pytest.mark.parametrize("n", NS)
def test_construction_induces_skew_planes(n):
    gen = rng(400 + n)
    ys = ball_points(gen, 1000, n + 1, 0.95)
    zs = ball_points(gen, 1000, n + 1, 0.95)
    for y, z in zip(ys, zs):
        a = fiber_to_skew_plane(standard_fiber(n, y))
        b = fiber_to_skew_plane(standard_fiber(n, z))
        assert a.dim == n
        assert skew(a, b)


@pytest.mark.parametrize("name", sorted(NON_SKEW))
def test_non_skew_pairs_are_unlinked(name):
    f1, f2 = NON_SKEW[name]
    assert not skew(fiber_to_skew_plane(f1), fiber_to_skew_plane(f2))
    assert not linked(f1, f2)
    assert not linked(f2, f1)


def test_hurwitz_radon_examples():
    expected = {1: 1, 2: 2, 3: 1, 4: 4, 8: 8, 12: 4, 16: 9, 32: 10, 64: 12, 128: 16, 256: 17}
    for q, rho in expected.items():
        assert hurwitz_radon(q) == rho
        assert rho_by_halving(q) == rho


def test_hurwitz_radon_matches_halving_oracle():
    mismatches = [q for q in range(1, 1_000_001) if hurwitz_radon(q) != rho_by_halving(q)]
    assert mismatches == []


@given(st.integers(1, 2**200))
def test_hurwitz_radon_big_integers(q):
    assert hurwitz_radon(q) == rho_by_halving(q)
    assert hurwitz_radon(q) == hurwitz_radon(q * 3 ** 5)


def test_hurwitz_radon_rejects_non_positive():
    for bad in (0, -4, 2.0, True, "8"):
        with pytest.raises(InvalidArgumentError):
            hurwitz_radon(bad)


def test_admissible_dimensions():
    assert unit_fibration_dimension_admissible(3)
    assert not unit_fibration_dimension_admissible(15)
    found = {n for n in range(10_001) if unit_fibration_dimension_admissible(n)}
    assert found == {0, 1, 3, 7}
    with pytest.raises(InvalidArgumentError):
        unit_fibration_dimension_admissible(-1)


def test_skew_fibration_exists_examples():
    assert skew_fibration_exists(1, 3)
    assert not skew_fibration_exists(2, 5)
    assert skew_fibration_exists(0, 1)
    # R^{2n+1} by n-planes exactly for the admissible n
    for n in range(64):
        assert skew_fibration_exists(n, 2 * n + 1) == (n in (0, 1, 3, 7))
    for n, d in ((2, 2), (3, 1), (-1, 4)):
        with pytest.raises(InvalidArgumentError):
            skew_fibration_exists(n, d)
