"""Point-mass flight simulator: rail slide, powered ascent, coast, parachute
descent, touchdown.

3-DOF with the attitude slaved to the velocity vector (gravity-turn
kinematics). Every scored quantity (apogee, landing point, impact speed,
peak dynamic pressure, flight time) is a point-mass observable. Integration
is fixed-step RK4 (5 ms ascent, 20 ms under parachute) with events located
by bisection; results are deterministic for identical inputs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernel as K
from .catalog import Catalog, MotorSpec, STANDARD_GRAVITY, default_catalog
from .design import Parachute, RocketDesign
from .geometry import mass_budget, reference_area, wetted_area

GRAVITY = STANDARD_GRAVITY

DT_ASCENT = 0.005   # s, rail / powered / coast
DT_DESCENT = 0.02   # s, under parachute
_MAX_STEPS_PER_CALL = 1024

# Artifact drag build-up constants (reference area = body cross-section).
NOSE_PRESSURE_CD = {
    "conical": 0.20,
    "ogive": 0.15,
    "tangent": 0.15,
    "von karman": 0.12,
    "lvhaack": 0.12,
    "elliptical": 0.16,
    "parabolic": 0.16,
    "powerseries": 0.16,
}
BASE_CD = 0.12
FIN_CD_PER_FIN = 0.01
AIR_VISCOSITY = 1.789e-5  # Pa*s, sea-level standard, held constant

COMPASS_POINTS = {"N": 0.0, "E": 90.0, "S": 180.0, "W": 270.0}

PHASE_ON_RAIL = "on_rail"
PHASE_POWERED = "powered"
PHASE_COAST = "coast"
PHASE_DROGUE = "drogue"
PHASE_MAIN = "main"
PHASE_LANDED = "landed"

FAILURE_DRC = "drc_failed"
FAILURE_TIMEOUT = "timeout"
FAILURE_DIVERGENCE = "numeric_divergence"


@dataclass(frozen=True)
class Environment:
    """Launch-site conditions. Wind is constant, horizontal, and uniform;
    ``wind_from`` is the compass direction the wind blows *from* (a token
    N/E/S/W or degrees), so wind from the East pushes the rocket West.
    Air follows the standard atmosphere with the pad at sea level."""

    wind_speed: float = 0.0
    wind_from: float | str = "E"

    def wind_vector(self) -> tuple[float, float]:
        if isinstance(self.wind_from, str):
            token = self.wind_from.strip().upper()
            if token not in COMPASS_POINTS:
                raise ValueError(f"unknown compass token {self.wind_from!r}")
            bearing = COMPASS_POINTS[token]
        else:
            bearing = float(self.wind_from)
        rad = math.radians(bearing)
        return (-self.wind_speed * math.sin(rad), -self.wind_speed * math.cos(rad))

    def to_dict(self) -> dict:
        return {"wind_speed": self.wind_speed, "wind_from": self.wind_from}

    @staticmethod
    def from_dict(d: dict) -> "Environment":
        return Environment(wind_speed=float(d["wind_speed"]), wind_from=d["wind_from"])


@dataclass(frozen=True)
class SimLimits:
    max_flight_time: float = 600.0       # s of simulated time
    max_wall_time: float | None = 30.0   # s of wall clock, None = unlimited
    cancel: Callable[[], bool] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SimOverrides:
    """Verification probes: force toggles and free-flight initial conditions.

    Setting an initial position or velocity skips the pad and rail and starts
    integration in free flight at t=0.
    """

    disable_thrust: bool = False
    disable_drag: bool = False
    disable_parachutes: bool = False
    initial_position: tuple[float, float, float] | None = None
    initial_velocity: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class MaxQState:
    time: float
    position: tuple[float, float, float]
    velocity: tuple[float, float, float]
    mass: float
    airspeed: float
    mach: float
    dynamic_pressure: float
    thrust: float
    drag: float
    mode: str  # body | drogue | main

    @property
    def altitude(self) -> float:
        return self.position[2]

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "position": list(self.position),
            "velocity": list(self.velocity),
            "mass": self.mass,
            "airspeed": self.airspeed,
            "mach": self.mach,
            "dynamic_pressure": self.dynamic_pressure,
            "thrust": self.thrust,
            "drag": self.drag,
            "mode": self.mode,
        }

    @staticmethod
    def from_dict(d: dict) -> "MaxQState":
        return MaxQState(
            time=d["time"],
            position=tuple(d["position"]),
            velocity=tuple(d["velocity"]),
            mass=d["mass"],
            airspeed=d["airspeed"],
            mach=d["mach"],
            dynamic_pressure=d["dynamic_pressure"],
            thrust=d["thrust"],
            drag=d["drag"],
            mode=d["mode"],
        )


@dataclass(frozen=True)
class FlightOutcome:
    apogee: float                 # m AGL
    apogee_time: float            # s
    landing_x: float              # m East of the pad
    landing_y: float              # m North of the pad
    impact_velocity: float        # m/s, speed at touchdown
    horizontal_distance: float    # m from the pad
    flight_time: float            # s
    burnout_mass: float           # kg
    max_dynamic_pressure: float   # Pa
    max_q_state: MaxQState | None
    structural_failure: bool | None = None  # filled by the structures module
    total_cost: float | None = None         # filled by the cost module
    failure: str | None = None    # drc_failed | timeout | numeric_divergence
    notes: str | None = None

    def to_dict(self) -> dict:
        return {
            "apogee": self.apogee,
            "apogee_time": self.apogee_time,
            "landing_x": self.landing_x,
            "landing_y": self.landing_y,
            "impact_velocity": self.impact_velocity,
            "horizontal_distance": self.horizontal_distance,
            "flight_time": self.flight_time,
            "burnout_mass": self.burnout_mass,
            "max_dynamic_pressure": self.max_dynamic_pressure,
            "max_q_state": self.max_q_state.to_dict() if self.max_q_state else None,
            "structural_failure": self.structural_failure,
            "total_cost": self.total_cost,
            "failure": self.failure,
            "notes": self.notes,
        }

    @staticmethod
    def from_dict(d: dict) -> "FlightOutcome":
        mq = d.get("max_q_state")
        return FlightOutcome(
            apogee=d["apogee"],
            apogee_time=d["apogee_time"],
            landing_x=d["landing_x"],
            landing_y=d["landing_y"],
            impact_velocity=d["impact_velocity"],
            horizontal_distance=d["horizontal_distance"],
            flight_time=d["flight_time"],
            burnout_mass=d["burnout_mass"],
            max_dynamic_pressure=d["max_dynamic_pressure"],
            max_q_state=MaxQState.from_dict(mq) if mq else None,
            structural_failure=d.get("structural_failure"),
            total_cost=d.get("total_cost"),
            failure=d.get("failure"),
            notes=d.get("notes"),
        )


@dataclass
class TrajectoryTrace:
    """Time series of integrator states: one row per accepted step."""

    rows: np.ndarray          # (n, 8): t, x, y, z, vx, vy, vz, mass
    phases: list[str]         # phase label per row

    CSV_HEADER = "t,x,y,z,vx,vy,vz,mass,phase"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for row, phase in zip(self.rows, self.phases):
            lines.append(",".join(repr(float(v)) for v in row) + f",{phase}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Thrust profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThrustProfile:
    """Trapezoidal thrust curve whose integral equals the motor's total
    impulse. Default shape: linear ramp to max thrust over the first 10% of
    the burn, a plateau sized to close the impulse, and a linear ramp to zero
    over the last 10%. When that plateau would exceed max thrust, the profile
    falls back to a max-thrust plateau with symmetric ramps sized to close
    the impulse instead."""

    c1: float        # s, end of up-ramp
    c2: float        # s, start of down-ramp
    ramp_peak: float  # N, thrust reached at c1
    plateau: float   # N
    burn_time: float

    def thrust(self, t: float) -> float:
        if t <= 0.0 or t >= self.burn_time:
            return 0.0
        if t < self.c1:
            return self.ramp_peak * t / self.c1
        if t < self.c2:
            return self.plateau
        return self.plateau * (self.burn_time - t) / (self.burn_time - self.c2)

    def impulse_to(self, t: float) -> float:
        """Closed-form integral of the profile from 0 to t (N*s)."""
        if t <= 0.0:
            return 0.0
        total = 0.0
        if t < self.c1:
            return 0.5 * self.ramp_peak * t * t / self.c1
        total += 0.5 * self.ramp_peak * self.c1
        if t < self.c2:
            return total + self.plateau * (t - self.c1)
        total += self.plateau * (self.c2 - self.c1)
        if t < self.burn_time:
            tail = self.burn_time - self.c2
            dt = t - self.c2
            return total + self.plateau * (dt - 0.5 * dt * dt / tail)
        return total + 0.5 * self.plateau * (self.burn_time - self.c2)


def thrust_profile(motor: MotorSpec) -> ThrustProfile:
    tb = motor.burn_time
    fmax = motor.max_thrust
    impulse = motor.total_impulse
    if impulse >= fmax * tb:
        raise ValueError(
            f"{motor.name}: total impulse {impulse} exceeds max thrust x burn time"
        )
    plateau = (impulse - 0.05 * tb * fmax) / (0.85 * tb)
    if plateau <= fmax:
        return ThrustProfile(c1=0.1 * tb, c2=0.9 * tb, ramp_peak=fmax,
                             plateau=plateau, burn_time=tb)
    alpha = max(1.0 - impulse / (fmax * tb), 1e-9)
    return ThrustProfile(c1=alpha * tb, c2=(1.0 - alpha) * tb, ramp_peak=fmax,
                         plateau=fmax, burn_time=tb)


def thrust_at(motor: MotorSpec, t: float) -> float:
    """Thrust (N) at time t seconds after ignition."""
    if t < 0.0:
        raise ValueError("time must be >= 0")
    return thrust_profile(motor).thrust(t)


# ---------------------------------------------------------------------------
# Drag helpers (shared by tests and the structures module)
# ---------------------------------------------------------------------------

def static_drag_constants(design: RocketDesign) -> tuple[float, float, float]:
    """(cd0, swet/aref, reference length) for the body drag build-up."""
    cd0 = (NOSE_PRESSURE_CD[design.nose_cone.kind] + BASE_CD
           + FIN_CD_PER_FIN * design.fins.number)
    swet_ratio = wetted_area(design) / reference_area(design)
    lref = design.body.length + design.nose_cone.length
    return cd0, swet_ratio, lref


def drag_coefficient(design: RocketDesign, speed: float, altitude: float) -> float:
    """Body drag coefficient at the given airspeed and altitude."""
    cd0, swet_ratio, lref = static_drag_constants(design)
    return float(K.body_drag_coefficient(speed, altitude, cd0, swet_ratio,
                                         lref, AIR_VISCOSITY))


def drag_force(design: RocketDesign, position, velocity, env: Environment,
               chute: Parachute | None = None) -> tuple[float, float, float]:
    """Aerodynamic force vector (N): body drag, or the parachute's CD*S with
    body drag dropped when ``chute`` is given."""
    from .atmosphere import density
    wx, wy = env.wind_vector()
    rx, ry, rz = velocity[0] - wx, velocity[1] - wy, velocity[2]
    speed = math.sqrt(rx * rx + ry * ry + rz * rz)
    if speed < 1e-12:
        return (0.0, 0.0, 0.0)
    rho = float(density(max(position[2], 0.0)))
    if chute is not None:
        coef = 0.5 * rho * speed * chute.cd_s
    else:
        cd = drag_coefficient(design, speed, max(position[2], 0.0))
        coef = 0.5 * rho * speed * cd * reference_area(design)
    return (-coef * rx, -coef * ry, -coef * rz)


# ---------------------------------------------------------------------------
# Simulation orchestration
# ---------------------------------------------------------------------------

def _pack_params(design: RocketDesign, env: Environment, motor: MotorSpec,
                 profile: ThrustProfile, m_floor: float,
                 overrides: SimOverrides) -> np.ndarray:
    P = np.zeros(K.N_PARAMS)
    P[K.P_G] = GRAVITY
    P[K.P_ISPG0] = motor.isp * STANDARD_GRAVITY
    P[K.P_TB] = profile.burn_time
    P[K.P_C1] = profile.c1
    P[K.P_C2] = profile.c2
    P[K.P_PEAK] = profile.ramp_peak
    P[K.P_PLAT] = profile.plateau
    wx, wy = env.wind_vector()
    P[K.P_WX] = wx
    P[K.P_WY] = wy
    P[K.P_AREF] = reference_area(design)
    cd0, swet_ratio, lref = static_drag_constants(design)
    P[K.P_CD0] = cd0
    P[K.P_SWET] = swet_ratio
    P[K.P_LREF] = lref
    P[K.P_MU] = AIR_VISCOSITY
    P[K.P_THRUST_ON] = 0.0 if overrides.disable_thrust else 1.0
    P[K.P_DRAG_ON] = 0.0 if overrides.disable_drag else 1.0
    zenith = math.radians(90.0 - design.launch.inclination)
    heading = math.radians(design.launch.heading)
    P[K.P_UX] = math.sin(zenith) * math.sin(heading)
    P[K.P_UY] = math.sin(zenith) * math.cos(heading)
    P[K.P_UZ] = math.cos(zenith)
    P[K.P_MFLOOR] = m_floor
    return P


def _solve_liftoff(profile: ThrustProfile, wet_mass: float, isp_g0: float,
                   uz: float, thrust_on: bool) -> float | None:
    """First time at which thrust exceeds the rail-axis weight component.

    Mass on the pad follows the closed-form burned impulse, so the returned
    instant is exact up to the bisection tolerance. The margin is increasing
    on the up-ramp and plateau (thrust grows or holds while mass falls) and
    can only fall on the down-ramp, so scanning the profile corners finds the
    first upward crossing.
    """
    if not thrust_on:
        return None

    def margin(t: float) -> float:
        m = wet_mass - profile.impulse_to(t) / isp_g0
        return profile.thrust(t) - m * GRAVITY * uz

    prev = 0.0
    for knot in (profile.c1, profile.c2, profile.burn_time):
        if margin(knot) > 0.0:
            lo, hi = prev, knot
            while hi - lo > 1e-7:
                mid = 0.5 * (lo + hi)
                if margin(mid) > 0.0:
                    hi = mid
                else:
                    lo = mid
            return hi
        prev = knot
    return None


class _ChutePlan:
    """Mutable deployment bookkeeping for one parachute."""

    def __init__(self, chute: Parachute, enabled: bool):
        self.cd_s = chute.cd_s
        self.lag = chute.lag
        self.apogee_trigger = chute.trigger == "apogee"
        self.trigger_altitude = (float(chute.trigger)
                                 if not self.apogee_trigger else None)
        self.enabled = enabled
        self.triggered_at: float | None = None
        self.deploy_time: float | None = None
        self.deployed = False

    def trigger(self, t: float) -> None:
        if self.enabled and self.triggered_at is None:
            self.triggered_at = t
            self.deploy_time = t + self.lag

    def armed_altitude(self) -> float:
        if (self.enabled and self.trigger_altitude is not None
                and self.triggered_at is None and not self.deployed):
            return self.trigger_altitude
        return -1.0


def simulate(design: RocketDesign, env: Environment,
             limits: SimLimits | None = None, *,
             catalog: Catalog | None = None,
             overrides: SimOverrides | None = None) -> FlightOutcome:
    """Simulate a flight. The design is assumed to have passed the DRC."""
    outcome, _ = _simulate(design, env, limits, catalog, overrides, want_trace=False)
    return outcome


def simulate_traced(design: RocketDesign, env: Environment,
                    limits: SimLimits | None = None, *,
                    catalog: Catalog | None = None,
                    overrides: SimOverrides | None = None,
                    ) -> tuple[FlightOutcome, TrajectoryTrace]:
    outcome, trace = _simulate(design, env, limits, catalog, overrides, want_trace=True)
    assert trace is not None
    return outcome, trace


def _simulate(design: RocketDesign, env: Environment, limits: SimLimits | None,
              catalog: Catalog | None, overrides: SimOverrides | None,
              want_trace: bool) -> tuple[FlightOutcome, TrajectoryTrace | None]:
    catalog = catalog or default_catalog()
    limits = limits or SimLimits()
    ov = overrides or SimOverrides()

    motor = catalog.motor(design.motor_choice)
    profile = thrust_profile(motor)
    masses = mass_budget(design, catalog)
    thrust_on = not ov.disable_thrust
    m_floor = masses.dry if thrust_on else masses.wet
    P = _pack_params(design, env, motor, profile, m_floor, ov)

    deadline = (time.monotonic() + limits.max_wall_time
                if limits.max_wall_time is not None else None)

    maxq = np.zeros(K.N_MAXQ)
    maxq[K.Q_Q] = -1.0
    trace_buf = np.zeros((_MAX_STEPS_PER_CALL + 2, 8)) if want_trace else np.zeros((1, 8))
    trace_rows: list[np.ndarray] = []
    trace_phases: list[str] = []
    want = 1 if want_trace else 0

    main = _ChutePlan(design.parachutes.main, not ov.disable_parachutes)
    drogue = _ChutePlan(design.parachutes.drogue, not ov.disable_parachutes)

    apogee_time: float | None = None
    apogee_alt: float | None = None
    active_cds = -1.0
    active_mode = 0.0  # 0 body, 1 drogue, 2 main
    failure: str | None = None
    notes: str | None = None
    landed = False
    t = 0.0
    state = np.zeros(7)

    def out_of_budget() -> bool:
        nonlocal failure, notes
        if limits.cancel is not None and limits.cancel():
            failure = FAILURE_TIMEOUT
            notes = "cancelled"
            return True
        if deadline is not None and time.monotonic() > deadline:
            failure = FAILURE_TIMEOUT
            notes = "wall-clock budget exceeded"
            return True
        return False

    def phase_label() -> str:
        if active_mode == 2.0:
            return PHASE_MAIN
        if active_mode == 1.0:
            return PHASE_DROGUE
        if thrust_on and t < profile.burn_time:
            return PHASE_POWERED
        return PHASE_COAST

    def collect_trace(n: int, label: str) -> None:
        if want_trace and n > 0:
            trace_rows.append(trace_buf[:n].copy())
            trace_phases.extend([label] * n)

    def breakpoints() -> list[float]:
        pts = [limits.max_flight_time]
        if thrust_on:
            pts += [profile.c1, profile.c2, profile.burn_time]
        for plan in (drogue, main):
            if plan.deploy_time is not None and not plan.deployed:
                pts.append(plan.deploy_time)
        return pts

    def next_stop() -> float:
        return min(p for p in breakpoints() if p > t + 1e-12)

    def record_apogee(at: float, alt: float) -> None:
        nonlocal apogee_time, apogee_alt
        apogee_time = at
        apogee_alt = alt
        if drogue.apogee_trigger:
            drogue.trigger(at)
        if main.apogee_trigger:
            main.trigger(at)

    def apply_due_deployments() -> None:
        nonlocal active_cds, active_mode
        for plan, mode in ((drogue, 1.0), (main, 2.0)):
            if (plan.deploy_time is not None and not plan.deployed
                    and plan.deploy_time <= t + 1e-9):
                plan.deployed = True
                # The main supersedes the drogue; never downgrade.
                if mode > active_mode:
                    active_mode = mode
                    active_cds = plan.cd_s

    # --- pad and rail ------------------------------------------------------
    if ov.initial_position is None and ov.initial_velocity is None:
        liftoff = _solve_liftoff(profile, masses.wet, motor.isp * STANDARD_GRAVITY,
                                 P[K.P_UZ], thrust_on)
        if liftoff is None or liftoff >= profile.burn_time:
            return _pad_outcome(masses, profile, maxq, notes="no liftoff"), (
                TrajectoryTrace(np.zeros((0, 8)), []) if want_trace else None)
        t = liftoff
        burned = profile.impulse_to(liftoff) / (motor.isp * STANDARD_GRAVITY)
        rail_state = np.array([0.0, 0.0, masses.wet - burned])
        exited = False
        while not exited:
            if out_of_budget():
                break
            stop = next_stop()
            seg = K.thrust_segment(t, P) if thrust_on else 3
            t, status, n = K.advance_rail(rail_state, t, stop, DT_ASCENT, seg, P,
                                          design.launch.rail_length, maxq,
                                          trace_buf, want, _MAX_STEPS_PER_CALL)
            collect_trace(n, PHASE_ON_RAIL)
            if status == K.EV_RAIL_EXIT:
                exited = True
            elif status == K.EV_RAIL_STALL:
                return _pad_outcome(masses, profile, maxq, notes="stalled on rail",
                                    flight_time=t), _make_trace(trace_rows, trace_phases, want_trace)
            elif t >= limits.max_flight_time - 1e-9:
                failure = FAILURE_TIMEOUT
                break
        if failure is not None:
            return _failure_outcome(failure, notes, t, state, masses, maxq,
                                    apogee_alt, apogee_time), _make_trace(
                                        trace_rows, trace_phases, want_trace)
        s, v = rail_state[0], rail_state[1]
        state[0] = P[K.P_UX] * s
        state[1] = P[K.P_UY] * s
        state[2] = P[K.P_UZ] * s
        state[3] = P[K.P_UX] * v
        state[4] = P[K.P_UY] * v
        state[5] = P[K.P_UZ] * v
        state[6] = rail_state[2]
    else:
        pos = ov.initial_position or (0.0, 0.0, 0.0)
        vel = ov.initial_velocity or (0.0, 0.0, 0.0)
        state[:3] = pos
        state[3:6] = vel
        state[6] = masses.wet
        if vel[2] <= 0.0:
            # Already descending (or at rest): the start point is the apogee.
            record_apogee(0.0, pos[2])

    # --- free flight -------------------------------------------------------
    while not landed and failure is None:
        if out_of_budget():
            break
        if t >= limits.max_flight_time - 1e-9:
            failure = FAILURE_TIMEOUT
            break
        apply_due_deployments()
        if apogee_time is not None:
            # Altitude triggers fire at the first descending instant at or
            # below their threshold, including right at apogee.
            for plan in (drogue, main):
                alt = plan.armed_altitude()
                if alt > 0.0 and state[2] <= alt:
                    plan.trigger(t)
        stop = next_stop()
        seg = K.thrust_segment(t, P) if thrust_on else 3
        dt = DT_DESCENT if active_cds >= 0.0 else DT_ASCENT
        label = phase_label()
        armed = 1 if apogee_time is None else 0
        t, status, n = K.advance_free(state, t, stop, dt, seg, active_cds,
                                      active_mode, armed, drogue.armed_altitude(),
                                      main.armed_altitude(), P, maxq,
                                      trace_buf, want, _MAX_STEPS_PER_CALL)
        collect_trace(n, label)
        if status == K.EV_DIVERGED:
            failure = FAILURE_DIVERGENCE
        elif status == K.EV_TOUCHDOWN:
            landed = True
        elif status == K.EV_APOGEE:
            record_apogee(t, state[2])
        elif status == K.EV_ALT1:
            drogue.trigger(t)
        elif status == K.EV_ALT2:
            main.trigger(t)

    if failure is not None:
        return _failure_outcome(failure, notes, t, state, masses, maxq,
                                apogee_alt, apogee_time), _make_trace(
                                    trace_rows, trace_phases, want_trace)

    # --- touchdown ---------------------------------------------------------
    if want_trace and trace_phases:
        trace_phases[-1] = PHASE_LANDED
    impact = math.sqrt(state[3] ** 2 + state[4] ** 2 + state[5] ** 2)
    outcome = FlightOutcome(
        apogee=float(apogee_alt) if apogee_alt is not None else float(maxq[K.Q_MAXZ]),
        apogee_time=float(apogee_time) if apogee_time is not None else 0.0,
        landing_x=float(state[0]),
        landing_y=float(state[1]),
        impact_velocity=float(impact),
        horizontal_distance=float(math.hypot(state[0], state[1])),
        flight_time=float(t),
        burnout_mass=float(state[6]) if thrust_on else masses.wet,
        max_dynamic_pressure=max(float(maxq[K.Q_Q]), 0.0),
        max_q_state=_maxq_state(maxq, design, thrust_on, ov.disable_drag),
    )
    return outcome, _make_trace(trace_rows, trace_phases, want_trace)


def _make_trace(rows: list[np.ndarray], phases: list[str],
                want_trace: bool) -> TrajectoryTrace | None:
    if not want_trace:
        return None
    data = np.concatenate(rows, axis=0) if rows else np.zeros((0, 8))
    return TrajectoryTrace(rows=data, phases=phases)


def _maxq_state(maxq: np.ndarray, design: RocketDesign,
                thrust_on: bool, drag_disabled: bool) -> MaxQState | None:
    if maxq[K.Q_Q] < 0.0:
        return None
    mode = {0.0: "body", 1.0: "drogue", 2.0: "main"}[float(maxq[K.Q_MODE])]
    q = float(maxq[K.Q_Q])
    speed = float(maxq[K.Q_SPEED])
    alt = max(float(maxq[K.Q_Z]), 0.0)
    if drag_disabled:
        drag = 0.0
    elif mode == "drogue":
        drag = q * design.parachutes.drogue.cd_s
    elif mode == "main":
        drag = q * design.parachutes.main.cd_s
    else:
        drag = q * drag_coefficient(design, speed, alt) * reference_area(design)
    return MaxQState(
        time=float(maxq[K.Q_T]),
        position=(float(maxq[K.Q_X]), float(maxq[K.Q_Y]), float(maxq[K.Q_Z])),
        velocity=(float(maxq[K.Q_VX]), float(maxq[K.Q_VY]), float(maxq[K.Q_VZ])),
        mass=float(maxq[K.Q_M]),
        airspeed=speed,
        mach=float(maxq[K.Q_MACH]),
        dynamic_pressure=q,
        thrust=float(maxq[K.Q_THRUST]) if thrust_on else 0.0,
        drag=drag,
        mode=mode,
    )


def _pad_outcome(masses, profile: ThrustProfile, maxq: np.ndarray,
                 notes: str, flight_time: float | None = None) -> FlightOutcome:
    return FlightOutcome(
        apogee=0.0,
        apogee_time=0.0,
        landing_x=0.0,
        landing_y=0.0,
        impact_velocity=0.0,
        horizontal_distance=0.0,
        flight_time=flight_time if flight_time is not None else profile.burn_time,
        burnout_mass=masses.dry,
        max_dynamic_pressure=max(maxq[K.Q_Q], 0.0),
        max_q_state=None,
        notes=notes,
    )


def _failure_outcome(failure: str, notes: str | None, t: float, state: np.ndarray,
                     masses, maxq: np.ndarray, apogee_alt: float | None,
                     apogee_time: float | None) -> FlightOutcome:
    return FlightOutcome(
        apogee=apogee_alt if apogee_alt is not None else max(maxq[K.Q_MAXZ], 0.0),
        apogee_time=apogee_time if apogee_time is not None else 0.0,
        landing_x=float(state[0]),
        landing_y=float(state[1]),
        impact_velocity=0.0,
        horizontal_distance=math.hypot(float(state[0]), float(state[1])),
        flight_time=t,
        burnout_mass=float(state[6]) if state[6] > 0 else masses.dry,
        max_dynamic_pressure=max(maxq[K.Q_Q], 0.0),
        max_q_state=None,
        failure=failure,
        notes=notes,
    )
