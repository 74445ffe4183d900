import json

import pytest
from hypothesis import given

from rocketeval.design import (DesignParseError, parse_design, run_drc,
                               serialize_design)

from .strategies import valid_designs


def _mutate(example_text: str, **changes) -> str:
    """Apply dotted-path updates to the example design and re-serialize."""
    data = json.loads(example_text)
    for path, value in changes.items():
        node = data
        keys = path.split(".")
        for key in keys[:-1]:
            node = node[key]
        node[keys[-1]] = value
    return json.dumps(data)


# --- parsing ---------------------------------------------------------------

def test_parse_example_design_echoes_fields(example_text, example_design):
    d = example_design
    assert d.motor_choice == "CesaroniO5800"
    assert d.body.radius == 0.1
    assert d.body.length == 1.2
    assert d.body.material == "fiberglass"
    assert d.body.thickness == 0.01
    assert d.nose_cone.kind == "ogive"
    assert d.nose_cone.material == "composite"
    assert d.fins.number == 4
    assert d.fins.tip_chord == 0.075
    assert d.tail.top_radius == 0.04
    assert d.tail.bottom_radius == 0.05
    assert d.parachutes.main.cd_s == 0.25
    assert d.parachutes.main.trigger == "apogee"
    assert d.parachutes.drogue.noise == (0.0, 8.3, 0.5)
    assert d.launch.rail_length == 1.2
    assert d.launch.inclination == 90.0
    assert d.payload.mass == 0.5
    assert d.payload.position == 0.6


def test_parse_python_config_block(example_text):
    data = json.loads(example_text)
    block = ("Reasoning about the design...\n```python\nconfig = "
             + repr(data) + "\n```\nDone.")
    design = parse_design(block)
    assert design == parse_design(example_text)


def test_parse_python_block_with_tuple_noise(example_text):
    text = """```python
config = {
    'motor_choice': 'Pro75M1670',
    'rocket_body': {'radius': 0.08, 'length': 1.0, 'material': 'aluminum',
                    'thickness': 0.004,},
    'aerodynamics': {
        'nose_cone': {'kind': 'conical', 'length': 0.2, 'material': 'aluminum'},
        'fins': {'number': 3, 'root_chord': 0.1, 'tip_chord': 0.05,
                 'span': 0.1, 'cant_angle': 0.0, 'material': 'plywood',
                 'thickness': 0.003},
        'tail': {'length': 0.1, 'top_radius': 0.04, 'bottom_radius': 0.06,
                 'material': 'aluminum'},
    },
    'parachutes': {
        'main': {'name': 'Main', 'cd_s': 1.5, 'trigger': 'apogee',
                 'sampling_rate': 105, 'lag': 1.5, 'noise': (0, 8.3, 0.5)},
        'drogue': {'name': 'Drogue', 'cd_s': 0.3, 'trigger': 'apogee',
                   'sampling_rate': 105, 'lag': 1.5, 'noise': (0, 8.3, 0.5)},
    },
    'launch': {'rail_length': 2.0, 'inclination': 88.0, 'heading': 90.0},
    'payload': {'mass': 1.0, 'position': -0.2},
}
```"""
    design = parse_design(text)
    assert design.motor_choice == "Pro75M1670"
    assert design.parachutes.main.noise == (0.0, 8.3, 0.5)


def test_missing_drogue_names_path(example_text):
    data = json.loads(example_text)
    del data["parachutes"]["drogue"]
    with pytest.raises(DesignParseError) as err:
        parse_design(json.dumps(data))
    assert err.value.path == "parachutes.drogue"


def test_unknown_nose_kind_token_rejected(example_text):
    bad = _mutate(example_text, **{"aerodynamics.nose_cone.kind": "Ogive"})
    with pytest.raises(DesignParseError) as err:
        parse_design(bad)
    assert "Ogive" in str(err.value)
    assert err.value.path == "aerodynamics.nose_cone.kind"


def test_inline_arithmetic_rejected(example_text):
    block = example_text.replace('"radius": 0.1', '"radius": 3/4', 1)
    source = "```python\nconfig = " + block + "\n```"
    with pytest.raises(DesignParseError) as err:
        parse_design(source)
    assert "arithmetic" in str(err.value)


def test_ill_typed_field_names_path(example_text):
    bad = _mutate(example_text, **{"rocket_body.radius": "wide"})
    with pytest.raises(DesignParseError) as err:
        parse_design(bad)
    assert err.value.path == "rocket_body.radius"


def test_unknown_trigger_token_rejected(example_text):
    bad = _mutate(example_text, **{"parachutes.main.trigger": "at_apogee"})
    with pytest.raises(DesignParseError):
        parse_design(bad)


def test_numeric_trigger_accepted(example_text):
    design = parse_design(_mutate(example_text, **{"parachutes.main.trigger": 300}))
    assert design.parachutes.main.trigger == 300.0


def test_no_design_found():
    with pytest.raises(DesignParseError):
        parse_design("I have no idea what to build.")


@given(valid_designs())
def test_parse_serialize_round_trip(design):
    assert parse_design(serialize_design(design)) == design


# --- design rule checks ------------------------------------------------------

def test_example_design_passes_drc(example_design, catalog):
    report = run_drc(example_design, catalog)
    assert report.passed
    assert report.violations == ()


def test_drc_pure(example_design, catalog):
    assert run_drc(example_design, catalog) == run_drc(example_design, catalog)


def _violations(example_text, catalog, **changes):
    report = run_drc(parse_design(_mutate(example_text, **changes)), catalog)
    return [v.rule_id for v in report.violations]


def test_body_radius_rule(example_text, catalog):
    # Pro75M1670 has a 0.075 m catalog radius; 0.07 m body must fail.
    ids = _violations(example_text, catalog,
                      **{"motor_choice": "Pro75M1670", "rocket_body.radius": 0.07})
    assert "body_radius_exceeds_motor" in ids
    ok = _violations(example_text, catalog,
                     **{"motor_choice": "Pro75M1670", "rocket_body.radius": 0.08})
    assert "body_radius_exceeds_motor" not in ok


def test_body_length_rule(example_text, catalog):
    ids = _violations(example_text, catalog, **{"rocket_body.length": 0.70})
    assert "body_length_exceeds_motor" in ids
    assert "body_length_exceeds_motor" not in _violations(
        example_text, catalog, **{"rocket_body.length": 0.80})


def test_tail_radii_rule(example_text, catalog):
    ids = _violations(example_text, catalog,
                      **{"aerodynamics.tail.top_radius": 0.04,
                         "aerodynamics.tail.bottom_radius": 0.04})
    assert "tail_radii_equal" in ids


def test_wall_thickness_rule(example_text, catalog):
    ids = _violations(example_text, catalog, **{"rocket_body.thickness": 0.2})
    assert "wall_thickness" in ids


def test_unknown_material_rule(example_text, catalog):
    ids = _violations(example_text, catalog,
                      **{"rocket_body.material": "Fiberglass"})
    assert "unknown_material" in ids


def test_unknown_motor_rule(example_text, catalog):
    ids = _violations(example_text, catalog, **{"motor_choice": "NoSuchMotor"})
    assert "unknown_motor" in ids


def test_positive_dimension_rule(example_text, catalog):
    ids = _violations(example_text, catalog,
                      **{"aerodynamics.fins.span": -0.1})
    assert "dimension_not_positive" in ids


def test_fin_taper_rule(example_text, catalog):
    ids = _violations(example_text, catalog,
                      **{"aerodynamics.fins.tip_chord": 0.4})
    assert "fin_taper" in ids


def test_launch_range_rules(example_text, catalog):
    assert "launch_inclination" in _violations(
        example_text, catalog, **{"launch.inclination": 95})
    assert "launch_inclination" in _violations(
        example_text, catalog, **{"launch.inclination": 0})
    assert "launch_heading" in _violations(
        example_text, catalog, **{"launch.heading": 360})


def test_drc_reports_all_violations(example_text, catalog):
    ids = _violations(example_text, catalog,
                      **{"rocket_body.radius": 0.05,
                         "rocket_body.length": 0.5,
                         "aerodynamics.tail.top_radius": 0.05,
                         "aerodynamics.tail.bottom_radius": 0.05,
                         "launch.heading": 400})
    assert {"body_radius_exceeds_motor", "body_length_exceeds_motor",
            "tail_radii_equal", "launch_heading"} <= set(ids)


def test_drc_passed_iff_no_violations(example_design, catalog):
    report = run_drc(example_design, catalog)
    assert report.passed == (len(report.violations) == 0)
