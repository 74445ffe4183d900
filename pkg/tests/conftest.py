import json

import pytest
from hypothesis import settings

from rocketeval.briefs import example_design_text
from rocketeval.catalog import default_catalog
from rocketeval.design import parse_design
from rocketeval.geometry import mass_budget

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def example_text():
    return example_design_text()


@pytest.fixture(scope="session")
def example_design(example_text):
    return parse_design(example_text)


def make_probe(total_mass: float, cd_s: float, catalog) -> "RocketDesign":
    """A light balsa test article on the smallest motor, with the payload mass
    chosen so the all-up mass is exactly ``total_mass`` kg."""
    base = {
        "motor_choice": "AeroTechH128W",
        "rocket_body": {"radius": 0.035, "length": 0.30,
                        "material": "balsa_wood", "thickness": 0.002},
        "aerodynamics": {
            "nose_cone": {"kind": "conical", "length": 0.1, "material": "balsa_wood"},
            "fins": {"number": 3, "root_chord": 0.05, "tip_chord": 0.03,
                     "span": 0.04, "cant_angle": 0.0, "material": "balsa_wood",
                     "thickness": 0.002},
            "tail": {"length": 0.05, "top_radius": 0.03, "bottom_radius": 0.035,
                     "material": "balsa_wood"},
        },
        "parachutes": {
            "main": {"cd_s": cd_s, "trigger": "apogee", "sampling_rate": 105,
                     "lag": 0.0, "noise": [0, 8.3, 0.5]},
            "drogue": {"cd_s": cd_s, "trigger": "apogee", "sampling_rate": 105,
                       "lag": 0.0, "noise": [0, 8.3, 0.5]},
        },
        "launch": {"rail_length": 1.0, "inclination": 90, "heading": 0},
        "payload": {"mass": 0.0, "position": 0.0},
    }
    design = parse_design(json.dumps(base))
    budget = mass_budget(design, catalog)
    payload = total_mass - budget.wet
    assert payload >= 0.0, "probe structure is heavier than the requested mass"
    base["payload"]["mass"] = payload
    return parse_design(json.dumps(base))


@pytest.fixture()
def probe_factory(catalog):
    return lambda total_mass=10.0, cd_s=2.0: make_probe(total_mass, cd_s, catalog)
