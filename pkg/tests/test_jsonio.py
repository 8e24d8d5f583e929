import json

import numpy as np
from hypothesis import given, strategies as st

from qlra._jsonio import complex_from_json, complex_to_json, dumps


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip_is_exact(x):
    assert json.loads(dumps({"x": x}))["x"] == x


def test_non_finite_becomes_null():
    assert json.loads(dumps([float("nan"), float("inf"), 1.0])) == [None, None, 1.0]


def test_integral_floats_keep_decimal_point():
    assert dumps([2.0]).strip() == "[2.0]"
    assert dumps([np.int64(2)]).strip() == "[2]"


def test_nested_layout_is_stable():
    doc = {"b": [[1.0, 2.0], [3.0, 4.0]], "a": {"k": True, "n": None}}
    assert dumps(doc) == dumps(json.loads(dumps(doc)))
    assert list(json.loads(dumps(doc))) == ["b", "a"]


@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e6), min_size=1, max_size=9))
def test_complex_roundtrip(zs):
    z = np.array(zs)
    assert np.array_equal(complex_from_json(json.loads(dumps(complex_to_json(z)))), z)
