import pytest

from bowley.config import (
    build_params,
    parse_axis,
    parse_drift,
    parse_grid,
    parse_overrides,
    parse_range,
    parse_scenario,
    read_params_file,
)
from bowley.dynamics import EconomyParams
from bowley.errors import ParseError

SCENARIO = """
r = 0.05
omega = 0.25
horizon = 10   # years

[sector]
name = a
e0 = 1
pi0 = 0.2
wage_drift = 0:1, 10:0.5

[sector]
name = s
e0 = 2
pi0 = 0.8
absorber = yes
"""


def test_parse_axis_inclusive():
    assert parse_axis("0.02:0.08:0.01") == [0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08]
    assert parse_axis("0.20:0.25:0.05") == [0.2, 0.25]
    assert parse_axis("0.3") == [0.3]


@pytest.mark.parametrize("spec", ["0.1:0.2", "a:b:c", "0.2:0.1:0.01", "0.1:0.2:0", ""])
def test_parse_axis_rejects(spec):
    with pytest.raises(ValueError):
        parse_axis(spec)


def test_parse_grid_order_and_defaults():
    grid = parse_grid("r=0.02:0.04:0.01,omega=0.20:0.25:0.05", EconomyParams(wage_bill=2))
    assert grid[:3] == [(2, 0.02, 0.2), (2, 0.02, 0.25), (2, 0.03, 0.2)]
    assert len(grid) == 6


@pytest.mark.parametrize("spec", ["", "x=1", "r=1,r=2", "r", "r=0.1:0.2"])
def test_parse_grid_rejects(spec):
    with pytest.raises(ValueError):
        parse_grid(spec, EconomyParams())


def test_parse_range():
    assert parse_range("0.02:0.08") == (0.02, 0.08)
    assert parse_range("3") == (3.0, 3.0)
    with pytest.raises(ValueError):
        parse_range("0.3:0.1")


def test_overrides_reject_unknown_keys():
    assert parse_overrides(["r=0.1", "omega = 0.3"]) == {"r": "0.1", "omega": "0.3"}
    with pytest.raises(ParseError):
        parse_overrides(["rate=0.1"])


def test_build_params():
    p = build_params({"e": "2", "max_steps": "10", "tol": "1e-6"})
    assert (p.wage_bill, p.max_steps, p.convergence_tol) == (2.0, 10, 1e-6)
    with pytest.raises(ParseError):
        build_params({"e": "two"})


def test_params_file(tmp_path):
    path = tmp_path / "p.cfg"
    path.write_text("# base case\ne = 1.5\nr=0.04\n")
    assert read_params_file(path) == {"e": "1.5", "r": "0.04"}
    path.write_text("bogus = 1\n")
    with pytest.raises(ParseError) as info:
        read_params_file(path)
    assert info.value.line == 1


def test_parse_drift():
    assert parse_drift("0:1, 38:0.75").points == ((0, 1), (38, 0.75))
    with pytest.raises(ParseError):
        parse_drift("0-1")
    with pytest.raises(ParseError):
        parse_drift("0:1, 5:-2")


def test_parse_scenario():
    sc = parse_scenario(SCENARIO)
    assert (sc.r, sc.omega, sc.horizon) == (0.05, 0.25, 10)
    assert [s.name for s in sc.sectors] == ["a", "s"]
    assert sc.sectors[1].absorber and not sc.sectors[0].absorber
    assert sc.sectors[0].wage_drift(10) == 0.5


@pytest.mark.parametrize(
    "edit",
    [
        lambda t: t.replace("absorber = yes", "absorber = no"),
        lambda t: t.replace("name = a\n", ""),
        lambda t: t.replace("[sector]", "[sectors]", 1),
        lambda t: t.replace("horizon = 10", "horizn = 10"),
        lambda t: t.replace("r = 0.05\n", ""),
        lambda t: t.replace("e0 = 1\n", "e0 = one\n"),
        lambda t: t.replace("pi0 = 0.2", "colour = red"),
        lambda t: t + "[sector]\nname = b\ne0 = 1\npi0 = 1\nabsorber = true\n",
    ],
)
def test_parse_scenario_rejects(edit):
    with pytest.raises(ParseError):
        parse_scenario(edit(SCENARIO))
