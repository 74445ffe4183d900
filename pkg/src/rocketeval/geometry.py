"""Component geometry: volumes, surface areas, and masses.

These formulas are the single source for both the structural mass used by the
flight simulator and the material volumes priced by the cost model. Shells
(nose, tail) use lateral surface area times the body wall thickness; the nose
area applies a shape factor relative to a straight cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import Catalog, MotorSpec
from .design import RocketDesign

# Lateral-area factor relative to a cone of the same base radius and length.
NOSE_AREA_FACTOR = {
    "conical": 1.00,
    "ogive": 1.10,
    "tangent": 1.08,
    "elliptical": 1.15,
    "parabolic": 1.12,
    "powerseries": 1.10,
    "von karman": 1.05,
    "lvhaack": 1.04,
}


def body_tube_volume(radius: float, length: float, thickness: float) -> float:
    """Annulus volume of the body tube (m^3)."""
    inner = max(radius - thickness, 0.0)
    return math.pi * (radius * radius - inner * inner) * length


def nose_surface_area(kind: str, base_radius: float, length: float) -> float:
    """Approximate lateral surface area of the nose cone (m^2)."""
    slant = math.hypot(base_radius, length)
    return NOSE_AREA_FACTOR[kind] * math.pi * base_radius * slant


def nose_shell_volume(kind: str, base_radius: float, length: float,
                      thickness: float) -> float:
    """Nose shell volume: surface area times the body wall thickness (m^3)."""
    return nose_surface_area(kind, base_radius, length) * thickness


def fin_planform_area(root_chord: float, tip_chord: float, span: float) -> float:
    """Trapezoidal planform area of one fin (m^2)."""
    return 0.5 * (root_chord + tip_chord) * span


def fin_set_volume(number: int, root_chord: float, tip_chord: float,
                   span: float, thickness: float) -> float:
    """Total plate volume of the fin set (m^3)."""
    return number * fin_planform_area(root_chord, tip_chord, span) * thickness


def tail_surface_area(top_radius: float, bottom_radius: float, length: float) -> float:
    """Lateral surface area of the tail frustum (m^2)."""
    slant = math.hypot(bottom_radius - top_radius, length)
    return math.pi * (top_radius + bottom_radius) * slant


def tail_shell_volume(top_radius: float, bottom_radius: float, length: float,
                      thickness: float) -> float:
    return tail_surface_area(top_radius, bottom_radius, length) * thickness


@dataclass(frozen=True)
class ComponentVolumes:
    body: float
    nose: float
    fins: float
    tail: float


def component_volumes(design: RocketDesign) -> ComponentVolumes:
    b, n, f, t = design.body, design.nose_cone, design.fins, design.tail
    return ComponentVolumes(
        body=body_tube_volume(b.radius, b.length, b.thickness),
        nose=nose_shell_volume(n.kind, b.radius, n.length, b.thickness),
        fins=fin_set_volume(f.number, f.root_chord, f.tip_chord, f.span, f.thickness),
        tail=tail_shell_volume(t.top_radius, t.bottom_radius, t.length, b.thickness),
    )


@dataclass(frozen=True)
class MassBudget:
    structure: float   # kg, body + nose + fins + tail
    motor_dry: float   # kg
    propellant: float  # kg
    payload: float     # kg

    @property
    def wet(self) -> float:
        return self.structure + self.motor_dry + self.propellant + self.payload

    @property
    def dry(self) -> float:
        return self.wet - self.propellant


def mass_budget(design: RocketDesign, catalog: Catalog) -> MassBudget:
    vols = component_volumes(design)
    motor: MotorSpec = catalog.motor(design.motor_choice)
    structure = (
        vols.body * catalog.material(design.body.material).density
        + vols.nose * catalog.material(design.nose_cone.material).density
        + vols.fins * catalog.material(design.fins.material).density
        + vols.tail * catalog.material(design.tail.material).density
    )
    return MassBudget(
        structure=structure,
        motor_dry=motor.dry_mass,
        propellant=motor.propellant_mass,
        payload=design.payload.mass,
    )


def reference_area(design: RocketDesign) -> float:
    """Aerodynamic reference area: body cross-section (m^2)."""
    return math.pi * design.body.radius ** 2


def wetted_area(design: RocketDesign) -> float:
    """Skin-friction wetted area: body + nose + both fin faces (m^2)."""
    b, n, f = design.body, design.nose_cone, design.fins
    body = 2.0 * math.pi * b.radius * b.length
    nose = nose_surface_area(n.kind, b.radius, n.length)
    fins = 2.0 * f.number * fin_planform_area(f.root_chord, f.tip_chord, f.span)
    return body + nose + fins
