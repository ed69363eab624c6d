import math

import numpy as np
import pytest

from besovlab.errors import CapabilityError, InputError
from besovlab.fields import (Field, GridSpec, RegionSpec, default_region,
                             eval_field, jump_set_of, make_field, sample,
                             scale_field, truncate)

from oracles import circle_arc_length


def test_indicator_evaluation(step):
    assert eval_field(step, 0.5)[0] == 1.0
    assert eval_field(step, 2.0)[0] == 0.0
    assert eval_field(step, np.array([[0.25], [1.25]])).ravel().tolist() == [1.0, 0.0]


def test_disk_membership(disk):
    # |(0.3, 0.3)| ~ 0.424 < 0.5
    assert eval_field(disk, np.array([0.3, 0.3]))[0] == 1.0
    assert eval_field(disk, np.array([0.5, 0.5]))[0] == 0.0


def test_nonfinite_point_rejected(step):
    with pytest.raises(InputError):
        eval_field(step, np.array([math.nan]))


def test_region_membership_is_exact():
    box = RegionSpec.box([0.0], [1.0])
    assert box.contains(np.array([[0.0], [1.0], [1.0 + 1e-12]])).tolist() == [True, True, False]


def test_truncate_clamps_amplitude(step3):
    t = truncate(step3, 1.0)
    assert eval_field(t, 0.5)[0] == 1.0
    assert eval_field(t, -0.5)[0] == 0.0


def test_truncate_inactive_and_zero(step3):
    same = truncate(step3, 5.0)
    xs = np.linspace(-1, 2, 37)[:, None]
    assert np.array_equal(eval_field(same, xs), eval_field(step3, xs))
    const = make_field("constant", value=-2.0)
    zero = truncate(const, 0.0)
    assert eval_field(zero, 0.3)[0] == 0.0


def test_truncate_rejects_negative(step):
    with pytest.raises(InputError):
        truncate(step, -0.5)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_truncation_pointwise_monotone(step3, vstep, seed):
    # |u_l(x) - u_l(y)| <= |u_m(x) - u_m(y)| <= |u(x) - u(y)| for l <= m
    rng = np.random.default_rng(seed)
    for f in (step3, vstep):
        xs = rng.uniform(-1.5, 2.5, (64, 1))
        ys = rng.uniform(-1.5, 2.5, (64, 1))
        prev = None
        for l in (0.25, 0.75, 1.5, 4.0):
            fl = truncate(f, l)
            d = np.linalg.norm(eval_field(fl, xs) - eval_field(fl, ys), axis=-1)
            if prev is not None:
                assert np.all(d >= prev - 1e-14)
            prev = d
        full = np.linalg.norm(eval_field(f, xs) - eval_field(f, ys), axis=-1)
        assert np.all(prev <= full + 1e-14)


def test_truncation_converges_pointwise(step3):
    xs = np.linspace(-1, 2, 31)[:, None]
    target = eval_field(step3, xs)
    for l in (10.0, 100.0):
        assert np.allclose(eval_field(truncate(step3, l), xs), target)


def test_jump_set_of_step(step):
    js = jump_set_of(step)
    locs = sorted(p.params["location"][0] for p in js.patches)
    assert locs == [0.0, 1.0]
    for p in js.patches:
        assert p.measure == 1.0
        assert p.jump_size == 1.0
    # interface measure reproduces the closed form to 1e-12
    assert abs(js.total_measure() - 2.0) <= 1e-12


def test_jump_set_of_disk(disk):
    js = jump_set_of(disk)
    assert len(js.patches) == 1
    patch = js.patches[0]
    assert patch.geometry == "circle"
    # circumference against the arc-length quadrature oracle
    assert abs(patch.measure - circle_arc_length(0.5)) <= 1e-9
    assert abs(patch.measure - 2.0 * math.pi * 0.5) <= 1e-12
    assert patch.jump_size == 1.0


def test_jump_set_of_box_measures():
    box = make_field("box_2d")
    js = jump_set_of(box)
    assert len(js.patches) == 4
    assert abs(js.total_measure() - 4.0) <= 1e-12


def test_jump_set_constant_empty():
    assert jump_set_of(make_field("constant", value=3.0)).patches == ()


def test_jump_set_requires_piecewise(bump):
    with pytest.raises(InputError):
        jump_set_of(bump)


def test_jump_set_adjacent_regions_unsupported():
    pieces = ((RegionSpec.box([0, 0], [1, 1]), np.array([1.0])),
              (RegionSpec.box([0.5, 0.5], [2, 2]), np.array([2.0])),)
    f = Field(2, 1, "piecewise", {"pieces": pieces}, support_radius=3.0)
    with pytest.raises(CapabilityError):
        jump_set_of(f)


def test_sample_constant_and_indicator(step):
    g = GridSpec(origin=(-1.0,), spacing=(0.25,), extent=(12,))
    const = make_field("constant", value=1.0)
    sc = sample(const, g)
    assert np.all(sc.payload["values"] == 1.0)
    ss = sample(step, g)
    centers = g.centers()[0]
    expect = ((centers >= 0.0) & (centers <= 1.0)).astype(float)
    assert np.array_equal(ss.payload["values"][:, 0], expect)
    assert ss.payload["source"] == step.name


def test_sample_exact_at_nodes(bump):
    g = GridSpec(origin=(-2.0,), spacing=(0.125,), extent=(64,))
    sb = sample(bump, g)
    node = g.centers()[0][17]
    assert abs(eval_field(sb, node)[0] - eval_field(bump, node)[0]) <= 1e-14


def test_grid_extends_by_zero(step):
    g = GridSpec(origin=(-1.0,), spacing=(0.1,), extent=(30,))
    sg = sample(step, g)
    assert eval_field(sg, 5.0)[0] == 0.0
    assert eval_field(sg, -5.0)[0] == 0.0


def test_grid_spec_validation():
    with pytest.raises(InputError):
        GridSpec(origin=(0.0,), spacing=(0.0,), extent=(4,))
    with pytest.raises(InputError):
        GridSpec(origin=(0.0,), spacing=(0.1,), extent=(1,))


def test_default_region_margin(step):
    region = default_region(step)
    assert region.contains(np.array([[-0.99], [1.99]])).all()
    assert not region.contains(np.array([[2.01]]))[0]


def test_scale_field(vstep):
    doubled = scale_field(vstep, 2.0)
    x = np.array([[0.5]])
    assert np.allclose(eval_field(doubled, x), 2.0 * eval_field(vstep, x))


def test_region_roundtrip():
    r = RegionSpec.union_of(RegionSpec.ball((0.0, 0.0), 1.0),
                            RegionSpec.box([2.0, 2.0], [3.0, 3.0]))
    r2 = RegionSpec.from_dict(r.to_dict())
    pts = np.array([[0.5, 0.5], [2.5, 2.5], [1.5, 1.5]])
    assert np.array_equal(r.contains(pts), r2.contains(pts))


def test_jump_patch_invariants(step3, disk):
    for f in (step3, disk):
        js = jump_set_of(f)
        for p in js.patches:
            assert p.jump_size > 0.0
            assert 0.0 <= p.measure < math.inf
            if p.normal is not None:
                assert np.linalg.norm(p.normal) == pytest.approx(1.0, abs=1e-14)


def test_jump_set_half_space_piece_unsupported():
    pieces = ((RegionSpec.half_space([1.0, 0.0], 0.0), np.array([1.0])),)
    f = Field(2, 1, "piecewise", {"pieces": pieces}, support_radius=1.0)
    with pytest.raises(CapabilityError):
        jump_set_of(f)
