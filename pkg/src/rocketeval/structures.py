"""Structural integrity at the peak-load point and the design's bill of cost.

The stress model is deliberately simple and fully pinned: thin-wall axial
compression plus gust-induced bending on the body tube at maximum dynamic
pressure, and a flat-plate flutter check on the fins. Every constant lives in
the table below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .atmosphere import pressure, speed_of_sound
from .catalog import Catalog
from .design import RocketDesign
from .flightsim import MaxQState
from .geometry import component_volumes, reference_area

# Pinned structural constants.
GUST_ANGLE_DEG = 2.0          # assumed transverse gust angle of attack at max-Q
SAFETY_FACTOR = 1.0
SHEAR_MODULUS_RATIO = 100.0   # shear modulus estimated as ratio x yield strength
FLUTTER_MARGIN_CAP = 1e9      # reported margin when the airspeed is ~zero


@dataclass(frozen=True)
class StressReport:
    max_q: float                 # Pa
    bending_stress: float        # Pa
    axial_stress: float          # Pa
    fin_flutter_margin: float    # flutter speed / airspeed at max-Q
    failed: bool
    failing_component: str | None = None  # body | fins

    def to_dict(self) -> dict:
        return {
            "max_q": self.max_q,
            "bending_stress": self.bending_stress,
            "axial_stress": self.axial_stress,
            "fin_flutter_margin": self.fin_flutter_margin,
            "failed": self.failed,
            "failing_component": self.failing_component,
        }


@dataclass(frozen=True)
class CostBreakdown:
    motor_cost: float
    body_cost: float
    nose_cost: float
    fins_cost: float
    tail_cost: float
    total_cost: float

    def to_dict(self) -> dict:
        return {
            "motor_cost": self.motor_cost,
            "body_cost": self.body_cost,
            "nose_cost": self.nose_cost,
            "fins_cost": self.fins_cost,
            "tail_cost": self.tail_cost,
            "total_cost": self.total_cost,
        }


def body_axial_stress(design: RocketDesign, axial_force: float) -> float:
    """Thin-wall tube compression: force over the annulus area (Pa)."""
    r = design.body.radius
    ri = max(r - design.body.thickness, 0.0)
    area = math.pi * (r * r - ri * ri)
    return axial_force / area if area > 0.0 else float("inf")


def body_bending_stress(design: RocketDesign, transverse_force: float) -> float:
    """Bending stress from a mid-span point load on a pinned tube (Pa)."""
    r = design.body.radius
    ri = max(r - design.body.thickness, 0.0)
    moment = transverse_force * design.body.length / 4.0
    inertia = math.pi / 4.0 * (r ** 4 - ri ** 4)
    return moment * r / inertia if inertia > 0.0 else float("inf")


def fin_flutter_speed(design: RocketDesign, catalog: Catalog, altitude: float) -> float:
    """Flat-plate flutter velocity (m/s) of the fin panel at the given altitude.

    Standard form: V_f = a * sqrt(G / (1.337 AR^3 p (lambda+1) / (2 (AR+2) (t/c)^3)))
    with the shear modulus taken as SHEAR_MODULUS_RATIO x yield strength. The
    cant angle reduces the effective span (projected panel).
    """
    fins = design.fins
    span = fins.span * math.cos(math.radians(fins.cant_angle))
    area = 0.5 * (fins.root_chord + fins.tip_chord) * span
    if area <= 0.0 or fins.root_chord <= 0.0:
        return 0.0
    aspect = span * span / area
    taper = fins.tip_chord / fins.root_chord
    t_over_c = fins.thickness / fins.root_chord
    shear_modulus = SHEAR_MODULUS_RATIO * catalog.material(fins.material).yield_strength
    p = pressure(altitude)
    denom = 1.337 * aspect ** 3 * p * (taper + 1.0)
    if denom <= 0.0:
        return 0.0
    return speed_of_sound(altitude) * math.sqrt(
        shear_modulus * 2.0 * (aspect + 2.0) * t_over_c ** 3 / denom
    )


def evaluate_structure(design: RocketDesign, peak: MaxQState | None,
                       catalog: Catalog) -> StressReport:
    """Assess the airframe at the flight's maximum-dynamic-pressure state."""
    if peak is None or peak.dynamic_pressure <= 0.0:
        return StressReport(max_q=0.0, bending_stress=0.0, axial_stress=0.0,
                            fin_flutter_margin=FLUTTER_MARGIN_CAP, failed=False)

    q = peak.dynamic_pressure
    axial_force = peak.thrust + peak.drag
    axial = body_axial_stress(design, axial_force)
    gust_load = q * math.radians(GUST_ANGLE_DEG) * reference_area(design)
    bending = body_bending_stress(design, gust_load)

    body_yield = catalog.material(design.body.material).yield_strength
    body_failed = (axial + bending) * SAFETY_FACTOR > body_yield

    altitude = max(peak.altitude, 0.0)
    flutter_speed = fin_flutter_speed(design, catalog, altitude)
    if peak.airspeed > 1e-9:
        margin = min(flutter_speed / peak.airspeed, FLUTTER_MARGIN_CAP)
    else:
        margin = FLUTTER_MARGIN_CAP
    fins_failed = margin < 1.0

    failing = "body" if body_failed else ("fins" if fins_failed else None)
    return StressReport(
        max_q=q,
        bending_stress=bending,
        axial_stress=axial,
        fin_flutter_margin=margin,
        failed=body_failed or fins_failed,
        failing_component=failing,
    )


def compute_cost(design: RocketDesign, catalog: Catalog) -> CostBreakdown:
    """Material volumes times unit prices, plus the motor's fixed cost."""
    vols = component_volumes(design)
    motor_cost = catalog.motor(design.motor_choice).cost
    body = vols.body * catalog.material(design.body.material).unit_price
    nose = vols.nose * catalog.material(design.nose_cone.material).unit_price
    fins = vols.fins * catalog.material(design.fins.material).unit_price
    tail = vols.tail * catalog.material(design.tail.material).unit_price
    return CostBreakdown(
        motor_cost=motor_cost,
        body_cost=body,
        nose_cost=nose,
        fins_cost=fins,
        tail_cost=tail,
        total_cost=motor_cost + body + nose + fins + tail,
    )
