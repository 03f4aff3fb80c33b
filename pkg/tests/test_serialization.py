import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenberg_xray.core import ModeIndex, RationalMomentum
from heisenberg_xray.serialization import SignalFormatError, parse_signal, serialize_signal
from heisenberg_xray.xray import PlanarAtom, SignalDecomposition

amps = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)
mode_keys = st.tuples(st.integers(-5, 5).filter(bool), st.integers(0, 9), st.integers(0, 9))
signals = st.builds(
    lambda modes, atoms, r: SignalDecomposition(
        tuple(PlanarAtom(xi, a) for xi, a in atoms), {ModeIndex(*k): a for k, a in modes.items()}, r
    ),
    st.dictionaries(mode_keys, amps, max_size=8),
    st.dictionaries(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), amps, max_size=3).map(lambda d: list(d.items())),
    st.sampled_from([None, RationalMomentum(1), RationalMomentum(2, 3)]),
)


def test_empty_round_trip():
    text = '{"planar":[],"modes":[]}'
    x = parse_signal(text)
    assert len(x) == 0
    assert json.loads(serialize_signal(x)) == json.loads(text)


def test_single_mode_bit_exact():
    text = serialize_signal(SignalDecomposition.unit(1, 0, 0))
    assert json.loads(text) == {"planar": [], "modes": [{"n": 1, "j": 0, "k": 0, "amp": [1.0, 0.0]}]}
    assert serialize_signal(parse_signal(text)) == text


def test_duplicate_rejected_unless_merged():
    text = json.dumps({"planar": [], "modes": [{"n": 1, "j": 0, "k": 0, "amp": [1, 0]}] * 2})
    with pytest.raises(SignalFormatError, match=r"modes\[1\]"):
        parse_signal(text)
    assert parse_signal(text, merge=True).modes[ModeIndex(1, 0, 0)] == 2


@given(signals)
@settings(max_examples=100)
def test_parse_inverts_serialize(x):
    assert parse_signal(serialize_signal(x)) == x


@given(signals)
@settings(max_examples=50)
def test_serialize_inverts_parse(x):
    text = serialize_signal(x)
    assert serialize_signal(parse_signal(text)) == text


def test_field_order_is_stable():
    text = serialize_signal(SignalDecomposition((PlanarAtom((1, 2), 1j),), {ModeIndex(-2, 1, 3): 0.5}, "1/2"))
    doc = json.loads(text)
    assert list(doc) == ["planar", "modes", "r"]
    assert list(doc["modes"][0]) == ["n", "j", "k", "amp"]


@pytest.mark.parametrize(
    "text,where",
    [
        ('{"planar": [], "modes": [', "line 1"),
        ('{\n"planar": [],\n"modes": [}', "line 3"),
        ('{"modes": [{"n": 0, "j": 0, "k": 0, "amp": [1, 0]}]}', r"modes\[0\]\.n"),
        ('{"modes": [{"n": 1, "j": -1, "k": 0, "amp": [1, 0]}]}', r"modes\[0\]"),
        ('{"modes": [{"n": 1.5, "j": 0, "k": 0, "amp": [1, 0]}]}', r"modes\[0\]\.n"),
        ('{"modes": [{"n": 1, "k": 0, "amp": [1, 0]}]}', r"modes\[0\]\.j"),
        ('{"modes": [{"n": 1, "j": 0, "k": 0, "amp": [1]}]}', r"modes\[0\]\.amp"),
        ('{"planar": [{"xi": [1], "amp": [1, 0]}]}', r"planar\[0\]\.xi"),
        ('{"planar": [], "extra": 1}', "unknown"),
        ('{"r": "0.5"}', "r:"),
        ("[]", "top level"),
    ],
)
def test_schema_errors(text, where):
    with pytest.raises(SignalFormatError, match=where):
        parse_signal(text)


def test_planar_atoms_merge():
    x = parse_signal('{"planar": [{"xi": [1, 0], "amp": [1, 0]}, {"xi": [1, 0], "amp": [0, 2]}], "modes": []}')
    assert len(x.planar) == 1
    assert x.planar[0].amp == 1 + 2j
    assert np.isclose(x.evaluate(0, 0), 1 + 2j)
