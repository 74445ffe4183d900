"""Task brief rendering.

The brief is the self-contained document an agent receives at the start of a
session: requirements, the scoring code, the component catalogs, design
notes, the response format, and one example design. The motor table is
embedded byte-for-byte from the catalog file so there is a single source of
truth.
"""

from __future__ import annotations

import json
from importlib import resources

from .catalog import Catalog, default_catalog
from .pipeline import TaskSpec
from .scoring import ALTITUDE_CHALLENGE

_ALTITUDE_SCORE_CODE = """\
structural_failure = None  # Whether the rocket structure failed during flight

percent_difference = abs(apogee - target_apogee) / target_apogee
distance_reward = 1.0 - percent_difference
distance_reward = max(0, distance_reward)

# Structural failure reward
structural_failure_reward = 0 if structural_failure else 1

# Horizontal distance reward (linear version)
max_horz_distance = target_apogee * {horz_scale}  # Scale factor
horz_distance_reward = max(0, 1 - horizontal_distance / max_horz_distance)

# Cost reward (linear version)
max_cost = {max_cost}  # Base cost scale
cost_factor = total_cost / max_cost
cost_reward = 1.0 - cost_factor
cost_reward = max(0, cost_reward)  # Clamp to minimum of 0

# Impact velocity reward (linear version)
max_impact_velocity = {max_impact}  # m/s
impact_factor = abs(impact_velocity) / max_impact_velocity
impact_reward = 1.0 - impact_factor
impact_reward = max(0, impact_reward)  # Clamp to minimum of 0

# Add additional rewards with weights
reward = (distance_reward*{w0} +
            horz_distance_reward * {w2} +
            cost_reward * {w3} +
            impact_reward * {w4} +
            structural_failure_reward * {w1})
"""

_LANDING_SCORE_CODE = """\
structural_failure = None  # Whether the rocket structure failed during flight

landing_error = ((landing_x - target_x)**2 + (landing_y - target_y)**2) ** 0.5
target_distance = (target_x**2 + target_y**2) ** 0.5
landing_error_percent = landing_error / target_distance
landing_reward = 1.0 - landing_error_percent
landing_reward = max(0, landing_reward)

# Structural failure reward
structural_failure_reward = 0 if structural_failure else 1

# Cost reward (linear version)
max_cost = {max_cost}  # Base cost scale
cost_factor = total_cost / max_cost
cost_reward = 1.0 - cost_factor
cost_reward = max(0, cost_reward)  # Clamp to minimum of 0

# Impact velocity reward (linear version)
max_impact_velocity = {max_impact}  # m/s
impact_factor = abs(impact_velocity) / max_impact_velocity
impact_reward = 1.0 - impact_factor
impact_reward = max(0, impact_reward)  # Clamp to minimum of 0

# Add additional rewards with weights
reward = (landing_reward*{w0} +
            structural_failure_reward * {w1} +
            cost_reward * {w2} +
            impact_reward * {w3})
"""

_RESPONSE_FORMAT = '''\
## Response Format

Please provide your design as a Python dictionary that can be directly used \
in our simulation software. Use the following format:

```python
config = {
    "motor_choice": "MOTOR_NAME",  # Choose from available motors
    "rocket_body": {
        "radius": RADIUS_IN_METERS,  # Body radius in meters (must be greater than motor Radius)
        "length": LENGTH_IN_METERS,  # Body length in meters
        "material": "MATERIAL",  # Choose from available materials
        "thickness": THICKNESS_IN_METERS,  # Wall thickness in meters
    },
    "aerodynamics": {
        "nose_cone": {
            "kind": "SHAPE",  # "conical", "ogive", "elliptical", "tangent", "von karman", "parabolic", "powerseries" or "lvhaack"
            "length": LENGTH_IN_METERS,
            "material": "MATERIAL",
        },
        "fins": {
            "number": NUMBER_OF_FINS,
            "root_chord": LENGTH_IN_METERS,
            "tip_chord": LENGTH_IN_METERS,
            "span": LENGTH_IN_METERS,
            "cant_angle": ANGLE_IN_DEGREES,
            "material": "MATERIAL",
            "thickness": THICKNESS_IN_METERS,
        },
        "tail": {
            "length": LENGTH_IN_METERS,
            "top_radius": RADIUS_IN_METERS,
            "bottom_radius": RADIUS_IN_METERS,
            "material": "MATERIAL",
        },
    },
    "parachutes": {
        "main": {
            "name": "Main",
            "cd_s": AREA,
            "trigger": "apogee" or ALTITUDE_IN_METERS,
            "sampling_rate": 105,
            "lag": 1.5,
            "noise": (0, 8.3, 0.5),
        },
        "drogue": {
            "name": "Drogue",
            "cd_s": AREA,
            "trigger": "apogee" or ALTITUDE_IN_METERS,
            "sampling_rate": 105,
            "lag": 1.5,
            "noise": (0, 8.3, 0.5),
        },
    },
    "launch": {
        "rail_length": LENGTH_IN_METERS,
        "inclination": ANGLE_IN_DEGREES,  # 90 is vertical launch
        "heading": ANGLE_IN_DEGREES,  # Compass heading, 0 is North
    },
    "payload": {  # point mass at position specified
        "mass": MASS_IN_KG,
        "position": POSITION_IN_METERS,  # relative to rocket center
    },
}
```
'''


def _wind_text(task: TaskSpec) -> str:
    env = task.environment
    if isinstance(env.wind_from, str):
        direction = env.wind_from.strip().upper()
    else:
        direction = f"{env.wind_from:g} deg"
    return f"{env.wind_speed:g} m/s from {direction} direction"


def example_design_text() -> str:
    return (resources.files("rocketeval.data") / "example_design.json").read_text()


def render_task_brief(task: TaskSpec, catalog: Catalog | None = None) -> str:
    """Compose the full task brief for a TaskSpec."""
    catalog = catalog or default_catalog()
    spec = task.challenge_spec()
    parts: list[str] = ["# Rocket Design Task", "", "## Design Requirements", ""]

    if task.challenge == ALTITUDE_CHALLENGE:
        parts.append(f"- **Target Apogee**: {task.target_apogee:.1f} meters")
    else:
        parts.append(f"- **Target Landing Position**: x={task.target_x:.1f} meters East, "
                     f"y={task.target_y:.1f} meters North of the launch site")
    parts.append(f"- **Wind Conditions**: {_wind_text(task)}")
    parts.append("")

    parts.append("## You are scored off the following")
    if task.challenge == ALTITUDE_CHALLENGE:
        parts += [
            "Distance to max apogee",
            "Cost: Cheaper the rocket the better the score",
            f"Does it land safely (less than {spec.max_impact_velocity:g} m/s is best)",
            "Does it not break",
            "Horz distance: How far is it from the initial launch site",
            "",
            "#Score func code shown below:",
            "```python",
            _ALTITUDE_SCORE_CODE.format(
                horz_scale=spec.horz_scale_factor,
                max_cost=spec.max_cost_scale,
                max_impact=spec.max_impact_velocity,
                w0=spec.weights[0], w1=spec.weights[1], w2=spec.weights[2],
                w3=spec.weights[3], w4=spec.weights[4],
            ),
            "```",
        ]
    else:
        parts += [
            "Distance to the target landing coordinates",
            "Cost: Cheaper the rocket the better the score",
            f"Does it land safely (less than {spec.max_impact_velocity:g} m/s is best)",
            "Does it not break",
            "",
            "#Score func code shown below:",
            "```python",
            _LANDING_SCORE_CODE.format(
                max_cost=spec.max_cost_scale,
                max_impact=spec.max_impact_velocity,
                w0=spec.weights[0], w1=spec.weights[1], w2=spec.weights[2],
                w3=spec.weights[3],
            ),
            "```",
        ]
    parts.append("")

    parts += [
        "## Available Materials",
        "",
        "The following materials are available for the rocket components:",
        ", ".join(catalog.material_names),
        "",
        "## Available Motors",
        catalog.motors_table_text.rstrip("\n"),
        "",
    ]

    parts += [
        "## Design Task",
        "",
        "Based on the requirements and available components, design a rocket. "
        "Your design should include:",
        "",
        "1. Motor selection (choose from the available motors list)",
        "2. Body dimensions and material",
        "3. Nose cone dimensions and material",
        "4. Fin design and material",
        "5. Parachute specifications",
        "6. Launch rail configuration",
        "",
        "### Notes",
        "Design rule checks are run on the design, so make sure it is feasible:",
        "- The tail top and bottom radius cannot be the same (causes an error)",
        "- The material must be specified exactly as listed above",
        "- The body radius must be greater than the motor radius",
        "- The body length must be greater than the motor length",
        "- The nose cone kind must be exactly one of the listed tokens",
        "- Do not include any additional Python code, and write plain numbers "
        "(no inline arithmetic such as 32/4) in the config",
        "",
    ]

    parts.append(_RESPONSE_FORMAT)
    parts += [
        "Here's an example valid design. This is not at all indicative of what "
        "you should do, just an example:",
        "",
        "```python",
        "config = " + example_design_text().strip(),
        "```",
        "",
        "Before answering, provide your full reasoning for the design choices "
        "you made, thinking like a rocket scientist. Run sample calculations "
        "and make approximations to find the best design.",
    ]
    return "\n".join(parts)
