"""Rocket design configuration: parsing, canonical JSON form, and design rule
checks.

The canonical wire format is strict JSON with the documented keys (see
``docs/design_schema.md``). Agent output is accepted through a tolerant
pre-pass that extracts a fenced ``config = {...}`` Python block and converts
dict-literal syntax (single quotes, tuples, trailing commas) to the same
structure. Inline arithmetic such as ``32/4`` is rejected, not evaluated.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import asdict, dataclass, field

from .catalog import Catalog

NOSE_KINDS = (
    "conical",
    "ogive",
    "elliptical",
    "tangent",
    "von karman",
    "parabolic",
    "powerseries",
    "lvhaack",
)

APOGEE_TRIGGER = "apogee"


class DesignParseError(ValueError):
    """Raised when a design document cannot be parsed into a RocketDesign.

    ``path`` is the dotted JSON path of the offending field when known.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class BodyTube:
    radius: float     # m
    length: float     # m
    material: str
    thickness: float  # m, wall


@dataclass(frozen=True)
class NoseCone:
    kind: str
    length: float  # m
    material: str


@dataclass(frozen=True)
class FinSet:
    number: int
    root_chord: float  # m
    tip_chord: float   # m
    span: float        # m
    cant_angle: float  # deg
    material: str
    thickness: float   # m


@dataclass(frozen=True)
class TailCone:
    length: float         # m
    top_radius: float     # m
    bottom_radius: float  # m
    material: str


@dataclass(frozen=True)
class Parachute:
    cd_s: float                 # m^2, drag coefficient times area
    trigger: str | float        # "apogee" or deployment altitude (m AGL)
    sampling_rate: float = 105.0  # Hz, stored only
    lag: float = 1.5              # s between trigger and inflation
    noise: tuple[float, float, float] = (0.0, 8.3, 0.5)  # stored, inert
    name: str | None = None


@dataclass(frozen=True)
class ParachutePair:
    main: Parachute
    drogue: Parachute


@dataclass(frozen=True)
class LaunchSetup:
    rail_length: float  # m
    inclination: float  # deg from horizontal, 90 = vertical
    heading: float      # deg compass, 0 = North


@dataclass(frozen=True)
class PointPayload:
    mass: float      # kg
    position: float  # m from rocket center, positive toward the nose


@dataclass(frozen=True)
class RocketDesign:
    motor_choice: str
    body: BodyTube
    nose_cone: NoseCone
    fins: FinSet
    tail: TailCone
    parachutes: ParachutePair
    launch: LaunchSetup
    payload: PointPayload


@dataclass(frozen=True)
class DrcViolation:
    rule_id: str
    message: str


@dataclass(frozen=True)
class DrcReport:
    passed: bool
    violations: tuple[DrcViolation, ...] = ()

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [[v.rule_id, v.message] for v in self.violations],
        }

    @staticmethod
    def from_dict(d: dict) -> "DrcReport":
        return DrcReport(
            passed=bool(d["passed"]),
            violations=tuple(DrcViolation(r, m) for r, m in d["violations"]),
        )


# ---------------------------------------------------------------------------
# Python config block pre-pass
# ---------------------------------------------------------------------------

_FENCED_BLOCK = re.compile(r"```(?:python)?\s*\n(.*?)```", re.DOTALL)
_CONFIG_ASSIGN = re.compile(r"config\s*=\s*", re.DOTALL)


def extract_config_block(text: str) -> str | None:
    """Return the source of the first fenced ``config = {...}`` block, if any."""
    for match in _FENCED_BLOCK.finditer(text):
        block = match.group(1)
        assign = _CONFIG_ASSIGN.search(block)
        if assign:
            return block[assign.end():]
    return None


def _literal_to_data(node: ast.AST):
    """Convert an AST literal to plain data, rejecting any computation."""
    if isinstance(node, ast.Dict):
        out = {}
        for k, v in zip(node.keys, node.values):
            if k is None:
                raise DesignParseError("dict unpacking is not allowed in config")
            key = _literal_to_data(k)
            if not isinstance(key, str):
                raise DesignParseError(f"config keys must be strings, got {key!r}")
            out[key] = _literal_to_data(v)
        return out
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_literal_to_data(e) for e in node.elts]
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (str, int, float, bool)) or node.value is None:
            return node.value
        raise DesignParseError(f"unsupported literal {node.value!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        operand = _literal_to_data(node.operand)
        if isinstance(operand, (int, float)) and not isinstance(operand, bool):
            return -operand if isinstance(node.op, ast.USub) else operand
        raise DesignParseError("unary sign applied to a non-number")
    if isinstance(node, ast.BinOp):
        raise DesignParseError(
            "inline arithmetic is not allowed in config values; "
            "write the evaluated number instead"
        )
    raise DesignParseError(f"unsupported syntax in config: {ast.dump(node)[:80]}")


def parse_config_block(source: str) -> dict:
    """Parse the Python-dict text after ``config =`` into plain data."""
    source = source.strip()
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError:
        # Trailing prose after the literal is common in model output; retry
        # with just the balanced braces.
        brace = _balanced_braces(source)
        if brace is None:
            raise DesignParseError("config block is not a valid Python literal") from None
        try:
            tree = ast.parse(brace, mode="eval")
        except SyntaxError:
            raise DesignParseError("config block is not a valid Python literal") from None
    data = _literal_to_data(tree.body)
    if not isinstance(data, dict):
        raise DesignParseError("config must be a dict")
    return data


def _balanced_braces(source: str) -> str | None:
    start = source.find("{")
    if start < 0:
        return None
    depth = 0
    in_string: str | None = None
    for i, ch in enumerate(source[start:], start):
        if in_string:
            if ch == in_string:
                in_string = None
            continue
        if ch in "'\"":
            in_string = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return source[start:i + 1]
    return None


# ---------------------------------------------------------------------------
# Structural parse
# ---------------------------------------------------------------------------

def _get(d: dict, path: str, key: str, kind: type | tuple, required: bool = True):
    here = f"{path}.{key}" if path else key
    if key not in d:
        if required:
            raise DesignParseError("required field is missing", here)
        return None
    value = d[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DesignParseError(f"expected a number, got {value!r}", here)
        return float(value)
    if kind is int:
        if isinstance(value, bool):
            raise DesignParseError(f"expected an integer, got {value!r}", here)
        if isinstance(value, float) and not value.is_integer():
            raise DesignParseError(f"expected an integer, got {value!r}", here)
        if not isinstance(value, (int, float)):
            raise DesignParseError(f"expected an integer, got {value!r}", here)
        return int(value)
    if not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "value"
        raise DesignParseError(f"expected {name}, got {type(value).__name__}", here)
    return value


def _parse_parachute(d: dict, path: str) -> Parachute:
    cd_s = _get(d, path, "cd_s", float)
    trigger = d.get("trigger")
    here = f"{path}.trigger"
    if trigger is None:
        raise DesignParseError("required field is missing", here)
    if isinstance(trigger, str):
        if trigger != APOGEE_TRIGGER:
            raise DesignParseError(
                f"unknown trigger token {trigger!r}; use 'apogee' or an altitude in meters",
                here,
            )
    elif isinstance(trigger, bool) or not isinstance(trigger, (int, float)):
        raise DesignParseError(f"expected 'apogee' or a number, got {trigger!r}", here)
    else:
        trigger = float(trigger)
    noise = d.get("noise", (0.0, 8.3, 0.5))
    if (not isinstance(noise, (list, tuple)) or len(noise) != 3
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in noise)):
        raise DesignParseError("noise must be a 3-element array of numbers", f"{path}.noise")
    sampling_rate = _get(d, path, "sampling_rate", float, required=False)
    lag = _get(d, path, "lag", float, required=False)
    return Parachute(
        cd_s=cd_s,
        trigger=trigger,
        sampling_rate=105.0 if sampling_rate is None else sampling_rate,
        lag=1.5 if lag is None else lag,
        noise=(float(noise[0]), float(noise[1]), float(noise[2])),
        name=d.get("name"),
    )


def design_from_dict(data: dict) -> RocketDesign:
    """Build a RocketDesign from plain data, reporting precise field paths."""
    if not isinstance(data, dict):
        raise DesignParseError("design document must be an object")

    motor_choice = _get(data, "", "motor_choice", str)
    body_d = _get(data, "", "rocket_body", dict)
    body = BodyTube(
        radius=_get(body_d, "rocket_body", "radius", float),
        length=_get(body_d, "rocket_body", "length", float),
        material=_get(body_d, "rocket_body", "material", str),
        thickness=_get(body_d, "rocket_body", "thickness", float),
    )

    aero = _get(data, "", "aerodynamics", dict)
    nose_d = _get(aero, "aerodynamics", "nose_cone", dict)
    kind = _get(nose_d, "aerodynamics.nose_cone", "kind", str)
    if kind not in NOSE_KINDS:
        raise DesignParseError(
            f"unknown nose cone kind {kind!r}; tokens are lowercase-exact: "
            + ", ".join(NOSE_KINDS),
            "aerodynamics.nose_cone.kind",
        )
    nose = NoseCone(
        kind=kind,
        length=_get(nose_d, "aerodynamics.nose_cone", "length", float),
        material=_get(nose_d, "aerodynamics.nose_cone", "material", str),
    )
    fins_d = _get(aero, "aerodynamics", "fins", dict)
    fins = FinSet(
        number=_get(fins_d, "aerodynamics.fins", "number", int),
        root_chord=_get(fins_d, "aerodynamics.fins", "root_chord", float),
        tip_chord=_get(fins_d, "aerodynamics.fins", "tip_chord", float),
        span=_get(fins_d, "aerodynamics.fins", "span", float),
        cant_angle=_get(fins_d, "aerodynamics.fins", "cant_angle", float),
        material=_get(fins_d, "aerodynamics.fins", "material", str),
        thickness=_get(fins_d, "aerodynamics.fins", "thickness", float),
    )
    tail_d = _get(aero, "aerodynamics", "tail", dict)
    tail = TailCone(
        length=_get(tail_d, "aerodynamics.tail", "length", float),
        top_radius=_get(tail_d, "aerodynamics.tail", "top_radius", float),
        bottom_radius=_get(tail_d, "aerodynamics.tail", "bottom_radius", float),
        material=_get(tail_d, "aerodynamics.tail", "material", str),
    )

    chutes_d = _get(data, "", "parachutes", dict)
    main_d = _get(chutes_d, "parachutes", "main", dict)
    drogue_d = _get(chutes_d, "parachutes", "drogue", dict)
    chutes = ParachutePair(
        main=_parse_parachute(main_d, "parachutes.main"),
        drogue=_parse_parachute(drogue_d, "parachutes.drogue"),
    )

    launch_d = _get(data, "", "launch", dict)
    launch = LaunchSetup(
        rail_length=_get(launch_d, "launch", "rail_length", float),
        inclination=_get(launch_d, "launch", "inclination", float),
        heading=_get(launch_d, "launch", "heading", float),
    )
    payload_d = _get(data, "", "payload", dict)
    payload = PointPayload(
        mass=_get(payload_d, "payload", "mass", float),
        position=_get(payload_d, "payload", "position", float),
    )
    return RocketDesign(
        motor_choice=motor_choice,
        body=body,
        nose_cone=nose,
        fins=fins,
        tail=tail,
        parachutes=chutes,
        launch=launch,
        payload=payload,
    )


def parse_design(text: str) -> RocketDesign:
    """Parse a design document: strict JSON, or a fenced Python config block."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise DesignParseError(f"invalid JSON: {e}") from None
        return design_from_dict(data)
    block = extract_config_block(text)
    if block is None:
        raise DesignParseError(
            "no design found: expected a JSON object or a fenced `config = {...}` block"
        )
    return design_from_dict(parse_config_block(block))


def _chute_dict(p: Parachute) -> dict:
    d: dict = {}
    if p.name is not None:
        d["name"] = p.name
    d.update({
        "cd_s": p.cd_s,
        "trigger": p.trigger,
        "sampling_rate": p.sampling_rate,
        "lag": p.lag,
        "noise": list(p.noise),
    })
    return d


def design_to_dict(design: RocketDesign) -> dict:
    """Plain-data form of a design, in the documented key layout."""
    return {
        "motor_choice": design.motor_choice,
        "rocket_body": asdict(design.body),
        "aerodynamics": {
            "nose_cone": asdict(design.nose_cone),
            "fins": asdict(design.fins),
            "tail": asdict(design.tail),
        },
        "parachutes": {
            "main": _chute_dict(design.parachutes.main),
            "drogue": _chute_dict(design.parachutes.drogue),
        },
        "launch": asdict(design.launch),
        "payload": asdict(design.payload),
    }


def serialize_design(design: RocketDesign, indent: int | None = 2) -> str:
    """Canonical JSON form; ``parse_design`` round-trips it exactly."""
    return json.dumps(design_to_dict(design), indent=indent)


# ---------------------------------------------------------------------------
# Design rule checks
# ---------------------------------------------------------------------------

def run_drc(design: RocketDesign, catalog: Catalog) -> DrcReport:
    """Run every design rule and report all violations, not just the first."""
    violations: list[DrcViolation] = []

    def fail(rule_id: str, message: str) -> None:
        violations.append(DrcViolation(rule_id, message))

    motor = catalog.motors.get(design.motor_choice)
    if motor is None:
        fail("unknown_motor",
             f"motor {design.motor_choice!r} is not in the motor catalog")
    else:
        if design.body.radius <= motor.radius:
            fail("body_radius_exceeds_motor",
                 f"body radius must exceed motor radius "
                 f"({design.body.radius} m <= {motor.radius} m)")
        if design.body.length <= motor.length:
            fail("body_length_exceeds_motor",
                 f"body length must exceed motor length "
                 f"({design.body.length} m <= {motor.length} m)")

    for component, name in (
        ("rocket_body", design.body.material),
        ("nose_cone", design.nose_cone.material),
        ("fins", design.fins.material),
        ("tail", design.tail.material),
    ):
        if name not in catalog.materials:
            fail("unknown_material",
                 f"{component} material {name!r} is not in the materials list "
                 "(names are case-sensitive)")

    if design.nose_cone.kind not in NOSE_KINDS:
        fail("unknown_nose_kind",
             f"nose cone kind {design.nose_cone.kind!r} is not one of: "
             + ", ".join(NOSE_KINDS))

    if design.tail.top_radius == design.tail.bottom_radius:
        fail("tail_radii_equal",
             f"tail top and bottom radius cannot be the same "
             f"(both {design.tail.top_radius} m)")

    if not design.body.thickness < design.body.radius:
        fail("wall_thickness",
             f"body wall thickness must be smaller than the body radius "
             f"({design.body.thickness} m >= {design.body.radius} m)")

    positive = [
        ("rocket_body.radius", design.body.radius),
        ("rocket_body.length", design.body.length),
        ("rocket_body.thickness", design.body.thickness),
        ("aerodynamics.nose_cone.length", design.nose_cone.length),
        ("aerodynamics.fins.root_chord", design.fins.root_chord),
        ("aerodynamics.fins.tip_chord", design.fins.tip_chord),
        ("aerodynamics.fins.span", design.fins.span),
        ("aerodynamics.fins.thickness", design.fins.thickness),
        ("aerodynamics.tail.length", design.tail.length),
        ("aerodynamics.tail.top_radius", design.tail.top_radius),
        ("aerodynamics.tail.bottom_radius", design.tail.bottom_radius),
        ("launch.rail_length", design.launch.rail_length),
    ]
    for path, value in positive:
        if not value > 0.0:
            fail("dimension_not_positive", f"{path} must be > 0 (got {value})")

    if design.fins.number < 2:
        fail("fin_count", f"at least 2 fins are required (got {design.fins.number})")
    if design.fins.tip_chord > design.fins.root_chord:
        fail("fin_taper",
             f"fin tip chord must not exceed root chord "
             f"({design.fins.tip_chord} m > {design.fins.root_chord} m)")

    for which, chute in (("main", design.parachutes.main),
                         ("drogue", design.parachutes.drogue)):
        if chute.cd_s < 0.0:
            fail("parachute_cd_s", f"parachutes.{which}.cd_s must be >= 0")
        if isinstance(chute.trigger, float) and chute.trigger <= 0.0:
            fail("parachute_trigger",
                 f"parachutes.{which} altitude trigger must be > 0 m AGL")

    if not 0.0 < design.launch.inclination <= 90.0:
        fail("launch_inclination",
             f"inclination must be in (0, 90] degrees (got {design.launch.inclination})")
    if not 0.0 <= design.launch.heading < 360.0:
        fail("launch_heading",
             f"heading must be in [0, 360) degrees (got {design.launch.heading})")

    if design.payload.mass < 0.0:
        fail("payload_mass", f"payload mass must be >= 0 (got {design.payload.mass})")

    return DrcReport(passed=not violations, violations=tuple(violations))
