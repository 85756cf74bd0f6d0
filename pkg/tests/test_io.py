import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoheat import catalog, io
from isoheat.fractal import SelfSimilarBand
from isoheat.geometry import Rectangle, RightIsoTriangle, Scaled, Union, polygon_invariants
from isoheat.spectra import first_eigenvalues
from isoheat.sturm import GridPotential, ZeroPotential
from isoheat.sturm.potential import GammaFlowPotential

DOMAINS = [
    Rectangle(1, 2),
    RightIsoTriangle(1.5, "DND"),
    catalog.mixed_square(),
    catalog.chapman_pair()[0],
    Scaled(RightIsoTriangle(1.0, "DDN"), 0.3),
    catalog.three_piece_bands()[1],
]


@pytest.mark.parametrize("d", DOMAINS)
def test_domain_round_trip(d):
    back = io.load_input(json.loads(io.dumps(io.domain_to_dict(d))))
    assert back == d
    np.testing.assert_array_equal(first_eigenvalues(back, 50), first_eigenvalues(d, 50))


def test_band_round_trip():
    b = SelfSimilarBand(Rectangle(1, 2), 1 / math.sqrt(2))
    back = io.load_input(json.loads(io.dumps(io.band_to_dict(b))))
    assert isinstance(back, SelfSimilarBand)
    assert back.alpha == b.alpha and back.generator == b.generator


def test_potential_round_trip():
    q = GridPotential.from_function(lambda x: np.cos(7 * x) / 3)
    back = io.load_input(json.loads(io.dumps(io.potential_to_dict(q))))
    np.testing.assert_array_equal(back.values, q.values)
    assert isinstance(io.load_input({"type": "zero"}), ZeroPotential)
    g = io.load_input({"type": "gamma", "n": 2, "s": 0.5})
    assert isinstance(g, GammaFlowPotential) and (g.n, g.s) == (2, 0.5)


def test_unknown_types():
    with pytest.raises(ValueError):
        io.load_input({"type": "hexagon"})
    with pytest.raises(ValueError):
        io.band_from_dict({"type": "rectangle", "a": 1, "b": 1})


def test_dumps_deterministic_and_exact():
    payload = {"b": [0.1, 1 / 3, np.float64(2.0) ** 0.5], "a": np.arange(3), "flag": np.bool_(True)}
    text = io.dumps(payload)
    assert text == io.dumps(payload)
    assert text.index('"b"') < text.index('"a"')
    back = json.loads(text)
    assert back["b"] == [0.1, 1 / 3, 2.0**0.5]
    assert back["a"] == [0, 1, 2] and back["flag"] is True
    assert "0.33333333333333331" in text


def test_dumps_nonfinite_as_null():
    back = json.loads(io.dumps({"x": [math.inf, -math.inf, math.nan, 1.0], "y": None}))
    assert back == {"x": [None, None, None, 1.0], "y": None}


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(io.fmt(x)) == x
    assert json.loads(io.dumps([x]))[0] == x


def test_csv_text():
    text = io.csv_text(["t", "value", "n"], [(0.1, 1 / 3, 4), (np.float64(2.5), -0.0, 5)])
    lines = text.splitlines()
    assert lines == ["t,value,n", "0.10000000000000001,0.33333333333333331,4", "2.5,-0,5"]


def test_union_dict_nesting():
    u = Union((Rectangle(1, 1), Scaled(RightIsoTriangle(2.0), 0.5)))
    d = io.domain_to_dict(u)
    assert d["type"] == "union" and d["parts"][1]["inner"]["type"] == "triangle"
    assert polygon_invariants(io.domain_from_dict(d)).area == pytest.approx(1.5, rel=1e-15)
