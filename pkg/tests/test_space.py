"""Search space encode/decode/transform behaviour."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedbo import Categorical, Integer, Real, SearchSpace, load_space
from mixedbo.exceptions import InvalidConfigError, InvalidPointError, SpaceError

from helpers import random_config, random_space

MIXED = SearchSpace([Real(0.0, 1.0), Integer(0, 4), Categorical(["a", "b", "c", "d"])])


def test_width_and_blocks():
    assert MIXED.width == 6
    assert MIXED.block(0) == slice(0, 1)
    assert MIXED.block(1) == slice(1, 2)
    assert MIXED.block(2) == slice(2, 6)
    assert np.array_equal(MIXED.lower, [0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert np.array_equal(MIXED.upper, [1.0, 4.0, 1.0, 1.0, 1.0, 1.0])


def test_encode_one_hot_layout():
    p = MIXED.encode((0.7, 2, "b"))
    assert np.array_equal(p, [0.7, 2.0, 0.0, 1.0, 0.0, 0.0])


def test_decode_inverts_encode_on_examples():
    for config in [(0.0, 0, "a"), (1.0, 4, "d"), (0.25, 3, "c")]:
        assert MIXED.decode(MIXED.encode(config)) == config


def test_transform_snaps_relaxed_point():
    p = np.array([0.7, 2.4, 0.1, 0.9, 0.3, 0.2])
    assert np.array_equal(MIXED.transform(p), [0.7, 2.0, 0.0, 1.0, 0.0, 0.0])


def test_integer_rounds_half_up():
    space = SearchSpace([Integer(-5, 5)])
    for raw, snapped in [(2.5, 3.0), (-2.5, -2.0), (0.49, 0.0), (0.5, 1.0), (-0.5, 0.0)]:
        assert space.transform(np.array([raw]))[0] == snapped


def test_integer_clips_to_bounds():
    space = SearchSpace([Integer(0, 4)])
    assert space.transform(np.array([9.7]))[0] == 4.0
    assert space.transform(np.array([-3.0]))[0] == 0.0


def test_real_clips_to_box():
    space = SearchSpace([Real(-1.0, 2.0)])
    assert space.transform(np.array([5.0]))[0] == 2.0
    assert space.transform(np.array([-1.5]))[0] == -1.0
    # in-box coordinates pass through bitwise
    v = 0.1 + 0.2
    assert space.transform(np.array([v]))[0] == v


def test_one_hot_tie_prefers_lowest_index():
    space = SearchSpace([Categorical(["a", "b", "c"])])
    assert np.array_equal(space.transform(np.array([0.5, 0.5, 0.1])), [1.0, 0.0, 0.0])
    assert np.array_equal(space.transform(np.zeros(3)), [1.0, 0.0, 0.0])


def test_transform_batch_matches_single():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-2.0, 6.0, size=(40, MIXED.width))
    batch = MIXED.transform(pts)
    assert batch.shape == pts.shape
    for row, out in zip(pts, batch):
        assert np.array_equal(MIXED.transform(row), out)


coords = st.lists(st.floats(-10.0, 10.0), min_size=6, max_size=6)


@given(coords)
@settings(max_examples=200, deadline=None)
def test_transform_idempotent(raw):
    p = np.array(raw)
    once = MIXED.transform(p)
    assert np.array_equal(MIXED.transform(once), once)


@given(coords)
@settings(max_examples=200, deadline=None)
def test_transformed_points_are_fixed_points(raw):
    assert MIXED.is_fixed_point(MIXED.transform(np.array(raw)))


@given(coords)
@settings(max_examples=200, deadline=None)
def test_decode_always_valid(raw):
    config = MIXED.decode(np.array(raw))
    assert MIXED.validate_config(config) == config


def test_fixed_points_are_exactly_encode_images():
    rng = np.random.default_rng(7)
    for _ in range(300):
        space = random_space(rng)
        p = space.encode(random_config(space, rng))
        assert space.is_fixed_point(p)
        q = space.sample(rng)
        assert space.is_fixed_point(q) == np.array_equal(q, space.transform(q))


def test_encode_decode_identity_randomized():
    rng = np.random.default_rng(11)
    for _ in range(300):
        space = random_space(rng)
        config = random_config(space, rng)
        assert space.decode(space.encode(config)) == config


def test_sample_stays_in_box():
    rng = np.random.default_rng(3)
    pts = MIXED.sample(rng, 500)
    assert pts.shape == (500, 6)
    assert np.all(pts >= MIXED.lower) and np.all(pts <= MIXED.upper)
    single = MIXED.sample(rng)
    assert single.shape == (6,)


def test_validate_config_rejects_bad_values():
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((0.5, 2))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((1.5, 2, "b"))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((0.5, 2.0, "b"))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((0.5, 7, "b"))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((0.5, 2, "z"))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((0.5, True, "b"))
    with pytest.raises(InvalidConfigError):
        MIXED.validate_config((float("nan"), 2, "b"))


def test_integer_accepts_numpy_ints():
    config = MIXED.validate_config((0.5, np.int64(3), "a"))
    assert config[1] == 3 and type(config[1]) is int


def test_transform_rejects_wrong_width():
    with pytest.raises(InvalidPointError):
        MIXED.transform(np.zeros(5))


def test_dimension_validation():
    with pytest.raises(SpaceError):
        Real(1.0, 1.0)
    with pytest.raises(SpaceError):
        Real(0.0, float("inf"))
    with pytest.raises(SpaceError):
        Integer(3, 1)
    with pytest.raises(SpaceError):
        Integer(0.5, 2)
    with pytest.raises(SpaceError):
        Categorical([])
    with pytest.raises(SpaceError):
        Categorical(["a", "a"])
    with pytest.raises(SpaceError):
        SearchSpace([])


def test_grid_axes():
    axes = MIXED.grid_axes(5)
    assert axes[0] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert axes[1] == [0, 1, 2, 3, 4]
    assert axes[2] == ["a", "b", "c", "d"]
    with pytest.raises(SpaceError):
        MIXED.grid_axes(1)


def test_json_round_trip(tmp_path):
    text = json.dumps(MIXED.to_dict())
    assert SearchSpace.from_json(text) == MIXED
    path = tmp_path / "space.json"
    path.write_text(text)
    assert load_space(path) == MIXED


def test_from_dict_schema():
    spec = {
        "dims": [
            {"kind": "real", "lower": 0.0, "upper": 1.0},
            {"kind": "integer", "lower": 0, "upper": 4},
            {"kind": "categorical", "labels": ["a", "b", "c", "d"]},
        ]
    }
    assert SearchSpace.from_dict(spec) == MIXED
    with pytest.raises(SpaceError):
        SearchSpace.from_dict({"dims": [{"kind": "ordinal", "lower": 0, "upper": 2}]})
    with pytest.raises(SpaceError):
        SearchSpace.from_dict({"space": []})
