import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scaler.errors import InvalidArgument, ParseError
from scaler.params import (
    CPV,
    ParameterSpace,
    ParameterSpec,
    builtin_space,
    default_cpv,
    enumerate_cpvs,
    load_space,
    parse_cpv,
    serialize_cpv,
    space_size,
    with_option,
)


def test_spark9_default(space9):
    assert serialize_cpv(default_cpv(space9)) == "P1=A,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A"
    assert space9.values(default_cpv(space9))["P1"] == "1024m"


def test_cpv_text_example(space9):
    c = with_option(space9, default_cpv(space9), "P1", 1)
    assert serialize_cpv(c) == "P1=B,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A"
    assert space9.value(c, "P1") == "1250m"


def test_empty_space():
    empty = ParameterSpace(())
    assert default_cpv(empty).indices == ()
    assert space_size(empty) == 1
    assert serialize_cpv(default_cpv(empty)) == ""
    assert parse_cpv(empty, "") == default_cpv(empty)


def test_sizes(space9):
    assert space_size(space9) == 512
    four = ParameterSpace(tuple(ParameterSpec(f"Q{i}", f"q{i}", ("a", "b", "c", "d")) for i in range(5)))
    assert space_size(four) == 1024


def test_scenario_spaces():
    s3 = builtin_space("multi9")
    assert [len(p.options) for p in s3.params] == [4, 4, 2, 4, 4, 4, 4, 4, 2]
    assert space_size(s3) == 4**7 * 2**2
    assert space9_defaults_match(s3)
    assert builtin_space("binary5").ids == ("P2", "P4", "P5", "P6", "P8")
    assert space_size(builtin_space("multi5")) == 4**5


def space9_defaults_match(space):
    base = builtin_space("spark9")
    return all(space.spec(pid).default == base.spec(pid).default for pid in space.ids if pid != "P8")


def test_with_option_value_semantics(space9):
    d = default_cpv(space9)
    c = with_option(space9, d, "P3", 1)
    assert d.indices == (0,) * 9
    assert with_option(space9, c, "P3", 1) == c


def test_with_option_locality():
    s = builtin_space("multi9")
    c = with_option(s, default_cpv(s), "P2", 3)
    assert [pid for pid, i in c.items() if i] == ["P2"]


@pytest.mark.parametrize("pid,idx", [("P99", 1), ("P1", 2), ("P1", -1)])
def test_with_option_errors(space9, pid, idx):
    with pytest.raises(Exception) as exc:
        with_option(space9, default_cpv(space9), pid, idx)
    assert isinstance(exc.value, (InvalidArgument, LookupError))


@pytest.mark.parametrize("text", [
    "P1=Z,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A",
    "P1=C,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A",
    "P1=A,P2=A",
    "P0=A,P1=A,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A",
    "P1=A,P1=B,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=A",
    "P1A,P2=A",
])
def test_parse_rejects(space9, text):
    with pytest.raises(ParseError):
        parse_cpv(space9, text)


def test_parse_is_order_free(space9):
    text = "P9=B,P1=B,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A"
    assert serialize_cpv(parse_cpv(space9, text)) == "P1=B,P2=A,P3=A,P4=A,P5=A,P6=A,P7=A,P8=A,P9=B"


def test_rejects_bad_specs():
    with pytest.raises(InvalidArgument):
        ParameterSpec("P1", "x", ("a",))
    with pytest.raises(InvalidArgument):
        ParameterSpec("P1", "x", ("a", "a"))
    with pytest.raises(InvalidArgument):
        ParameterSpace((ParameterSpec("P1", "x", ("a", "b")), ParameterSpec("P1", "y", ("a", "b"))))


def test_load_space_file(tmp_path, space9):
    p = tmp_path / "space.json"
    p.write_text(json.dumps(space9.to_list()))
    assert load_space(p) == space9


@st.composite
def spaces(draw):
    n = draw(st.integers(0, 6))
    sizes = draw(st.lists(st.integers(2, 4), min_size=n, max_size=n))
    return ParameterSpace(tuple(
        ParameterSpec(f"P{i + 1}", f"param{i}", tuple(f"v{j}" for j in range(k)))
        for i, k in enumerate(sizes)
    ))


@st.composite
def space_and_cpv(draw):
    s = draw(spaces())
    idx = tuple(draw(st.integers(0, len(p.options) - 1)) for p in s.params)
    return s, CPV(s.ids, idx)


@given(space_and_cpv())
def test_roundtrip(sc):
    s, c = sc
    assert parse_cpv(s, serialize_cpv(c)) == c


@given(spaces())
def test_size_matches_enumeration(s):
    cpvs = list(enumerate_cpvs(s))
    assert len(cpvs) == space_size(s)
    assert len(set(cpvs)) == len(cpvs)


@given(space_and_cpv(), st.data())
def test_with_option_hamming(sc, data):
    s, c = sc
    if not len(s):
        return
    p = data.draw(st.sampled_from(s.params))
    j = data.draw(st.integers(0, len(p.options) - 1))
    out = with_option(s, c, p.id, j)
    diff = sum(a != b for a, b in zip(c.indices, out.indices))
    assert diff == (0 if c[p.id] == j else 1)
