import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from casimirlab import (DomainError, HeightMap, InterpolatedForce, RoughnessProfile,
                        corrected_force, histogram_from_heightmap, ideal_metal_force)
from casimirlab.roughness import max_shift

K = 1e-30


def stub(d):
    return -K / np.asarray(d, dtype=float) ** 3


def test_flat_profiles_leave_force_unchanged():
    flat = RoughnessProfile.flat()
    for d in (50e-9, 1e-7, 3.3e-7):
        assert corrected_force(stub, flat, flat, d) == stub(d)


def test_two_bin_enhancement_factor():
    sphere = RoughnessProfile([-10e-9, 10e-9], [0.5, 0.5])
    d = 100e-9
    factor = corrected_force(stub, sphere, RoughnessProfile.flat(), d) / stub(d)
    hand = 0.5 * (100 / 90) ** 3 + 0.5 * (100 / 110) ** 3
    assert factor == pytest.approx(hand, rel=1e-14)
    assert factor == pytest.approx(1.0615, abs=1e-4)


def test_swap_invariance(rng):
    a = RoughnessProfile(rng.normal(0, 5e-9, 7), np.full(7, 1 / 7)).centered()
    b = RoughnessProfile(rng.normal(0, 3e-9, 4), [0.1, 0.2, 0.3, 0.4]).centered()
    assert corrected_force(stub, a, b, 80e-9) == pytest.approx(corrected_force(stub, b, a, 80e-9),
                                                                rel=1e-14)


@st.composite
def symmetric_profiles(draw):
    n = draw(st.integers(1, 6))
    deltas = draw(st.lists(st.floats(0.5e-9, 15e-9), min_size=n, max_size=n, unique=True))
    weights = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    weights = weights / (2 * weights.sum())
    delta = np.concatenate([-np.array(deltas), deltas])
    v = np.concatenate([weights, weights])
    return RoughnessProfile(delta, v / v.sum())


@settings(max_examples=100)
@given(symmetric_profiles(), symmetric_profiles(), st.floats(40e-9, 400e-9), st.floats(1.0, 5.0))
def test_jensen_direction(sphere, plate, d, n):
    def law(x):
        return -K / np.asarray(x) ** n

    corrected = corrected_force(law, sphere, plate, d)
    assert abs(corrected) > abs(law(d))


def test_interpenetration_names_bins():
    sphere = RoughnessProfile([-30e-9, 30e-9], [0.5, 0.5])
    plate = RoughnessProfile([-25e-9, 25e-9], [0.5, 0.5])
    with pytest.raises(DomainError, match="sphere bin 1.*plate bin 1"):
        corrected_force(stub, sphere, plate, 50e-9)
    assert max_shift(sphere, plate) == pytest.approx(55e-9)


def test_correction_grows_at_short_distance():
    profile = RoughnessProfile([-8e-9, 0.0, 8e-9], [0.25, 0.5, 0.25])
    factors = [corrected_force(stub, profile, profile, d) / stub(d) for d in (40e-9, 80e-9, 200e-9)]
    assert factors[0] > factors[1] > factors[2] > 1.0
    assert factors[0] > 1.2


# profiles ------------------------------------------------------------------

@pytest.mark.parametrize("delta, v", [([], []), ([0.0, 1.0], [0.5, 0.6]), ([0.0], [-1.0])])
def test_profile_validation(delta, v):
    with pytest.raises(DomainError):
        RoughnessProfile(delta, v)


def test_profile_is_sorted_and_round_trips(tmp_path):
    p = RoughnessProfile([3e-9, -1e-9, 0.0], [0.2, 0.5, 0.3])
    np.testing.assert_array_equal(p.delta, [-1e-9, 0.0, 3e-9])
    np.testing.assert_array_equal(p.v, [0.5, 0.3, 0.2])
    p.save(tmp_path / "p.json")
    q = RoughnessProfile.load(tmp_path / "p.json")
    np.testing.assert_array_equal(q.delta, p.delta)
    assert abs(p.centered().mean) < 1e-24


def test_constant_map_gives_flat_profile():
    p = histogram_from_heightmap(HeightMap(np.full((8, 8), 3e-9)), 10)
    assert p.delta.tolist() == [0.0] and p.v.tolist() == [1.0]


def test_two_level_map():
    h = np.zeros((10, 10))
    h[:, 5:] = 20e-9
    p = histogram_from_heightmap(HeightMap(h), 2)
    np.testing.assert_allclose(p.delta, [-10e-9, 10e-9], rtol=1e-12)
    np.testing.assert_allclose(p.v, [0.5, 0.5])


def test_gaussian_map_variance(rng):
    h = rng.normal(0.0, 5e-9, (512, 512))
    p = histogram_from_heightmap(HeightMap(h, 10e-6 / 512), 32)
    assert p.variance == pytest.approx(25e-18, rel=0.05)
    assert abs(p.mean) < 1e-15


def test_bin_refinement_is_stable(rng):
    hmap = HeightMap(rng.normal(0.0, 5e-9, (256, 256)))
    flat = RoughnessProfile.flat()
    coarse, fine = (corrected_force(stub, histogram_from_heightmap(hmap, n), flat, 60e-9)
                    for n in (16, 64))
    assert abs(coarse - fine) < 0.01 * abs(fine)


def test_heightmap_csv_forms(tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("z0,z1,z2\n1e-9,2e-9,3e-9\n4e-9,5e-9,6e-9\n")
    assert HeightMap.from_csv(grid).heights.shape == (2, 3)
    column = tmp_path / "col.csv"
    column.write_text("height_m\n" + "\n".join(str(i * 1e-9) for i in range(6)) + "\n")
    assert HeightMap.from_csv(column, width=3).heights.shape == (2, 3)
    with pytest.raises(DomainError):
        HeightMap.from_csv(column, width=4)


def test_heightmap_validation():
    with pytest.raises(DomainError):
        HeightMap(np.array([[np.nan]]))
    with pytest.raises(DomainError):
        HeightMap(np.zeros(4))


# interpolation -------------------------------------------------------------

def test_interpolated_force_reproduces_power_law():
    d = np.geomspace(20e-9, 1e-6, 48)
    law = InterpolatedForce(d, -ideal_metal_force(1e-4, d))
    probe = np.geomspace(25e-9, 9e-7, 17)
    np.testing.assert_allclose(law(probe), -ideal_metal_force(1e-4, probe), rtol=1e-12)


def test_interpolated_force_refuses_to_extrapolate():
    d = np.geomspace(20e-9, 1e-6, 8)
    law = InterpolatedForce(d, stub(d))
    with pytest.raises(DomainError, match="outside"):
        law(10e-9)
    with pytest.raises(DomainError):
        InterpolatedForce(d, np.where(d > 1e-7, 1.0, -1.0))
