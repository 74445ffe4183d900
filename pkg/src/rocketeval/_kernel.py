"""Numba-compiled integration core for the flight simulator.

Fixed-step RK4 over the point-mass state (x, y, z, vx, vy, vz, m) with
event localization by bisection. The orchestration (phase bookkeeping,
breakpoints, parachute scheduling, timeouts) lives in ``flightsim``; this
module only advances the state between breakpoints and reports events.

Thrust is evaluated per *segment* of the trapezoidal profile. A step never
crosses a segment boundary (the orchestrator breaks at the corner times), and
all four RK4 stages use the step's starting segment, so the quadrature of the
piecewise-linear profile is exact and propellant mass closes to roundoff.
"""

from __future__ import annotations

import math

from numba import njit

from .atmosphere import density, speed_of_sound

# Parameter vector layout.
P_G = 0          # gravity (m/s^2)
P_ISPG0 = 1      # isp * g0 (m/s), converts thrust to mass flow
P_TB = 2         # burn time (s)
P_C1 = 3         # end of up-ramp (s)
P_C2 = 4         # start of down-ramp (s)
P_PEAK = 5       # thrust at end of up-ramp (N)
P_PLAT = 6       # plateau thrust (N)
P_WX = 7         # wind velocity x (m/s)
P_WY = 8         # wind velocity y (m/s)
P_AREF = 9       # reference area (m^2)
P_CD0 = 10       # pressure + base + fin drag coefficient
P_SWET = 11      # wetted area / reference area
P_LREF = 12      # Reynolds reference length (m)
P_MU = 13        # dynamic viscosity (Pa*s)
P_THRUST_ON = 14
P_DRAG_ON = 15
P_UX = 16        # rail / thrust-fallback unit vector
P_UY = 17
P_UZ = 18
P_MFLOOR = 19    # mass floor (kg)
N_PARAMS = 20

# Max-Q accumulator layout.
Q_Q = 0
Q_T = 1
Q_X = 2
Q_Y = 3
Q_Z = 4
Q_VX = 5
Q_VY = 6
Q_VZ = 7
Q_M = 8
Q_SPEED = 9
Q_MACH = 10
Q_THRUST = 11
Q_MODE = 12      # 0 body, 1 drogue, 2 main
Q_MAXZ = 13
N_MAXQ = 14

# Advance statuses.
EV_NONE = 0        # reached t_stop or step budget
EV_APOGEE = 1
EV_ALT1 = 2        # crossed first altitude trigger
EV_ALT2 = 3        # crossed second altitude trigger
EV_TOUCHDOWN = 4
EV_DIVERGED = 5
EV_RAIL_EXIT = 6
EV_RAIL_STALL = 7  # velocity on the rail dropped to zero

# Compressibility correction constants (artifact drag model).
_PG95 = 1.0 / math.sqrt(1.0 - 0.95 * 0.95)
_TRANSONIC_PEAK = 4.0
_SUPERSONIC_FLOOR = 1.8
_SUPERSONIC_DECAY = 3.0

_BISECT_TOL = 1e-5  # s, inside the documented 1e-4 event tolerance


@njit(cache=True)
def thrust_segment(t, P):
    """Profile segment index at time t: 0 ramp-up, 1 plateau, 2 ramp-down, 3 off."""
    if t < P[P_C1]:
        return 0
    if t < P[P_C2]:
        return 1
    if t < P[P_TB]:
        return 2
    return 3


@njit(cache=True)
def thrust_in_segment(t, seg, P):
    if seg == 0:
        if t <= 0.0:
            return 0.0
        return P[P_PEAK] * t / P[P_C1]
    if seg == 1:
        return P[P_PLAT]
    if seg == 2:
        return P[P_PLAT] * (P[P_TB] - t) / (P[P_TB] - P[P_C2])
    return 0.0


@njit(cache=True)
def skin_friction(re):
    """Flat-plate skin friction coefficient; floored Reynolds keeps it bounded."""
    if re < 1.0e4:
        re = 1.0e4
    if re < 5.0e5:
        return 1.328 / math.sqrt(re)
    return 0.074 / re ** 0.2


@njit(cache=True)
def mach_factor(mach):
    """Compressibility multiplier: Prandtl-Glauert below M=0.95, then a
    transonic penalty band decaying to a supersonic floor."""
    if mach < 0.95:
        return 1.0 / math.sqrt(1.0 - mach * mach)
    if mach <= 1.05:
        return _PG95 + (_TRANSONIC_PEAK - _PG95) * (mach - 0.95) / 0.10
    return _SUPERSONIC_FLOOR + (_TRANSONIC_PEAK - _SUPERSONIC_FLOOR) * math.exp(
        -_SUPERSONIC_DECAY * (mach - 1.05)
    )


@njit(cache=True)
def body_drag_coefficient(speed, altitude, cd0, swet_ratio, lref, mu):
    """Total body drag coefficient at airspeed/altitude (reference: body area)."""
    rho = density(altitude)
    snd = speed_of_sound(altitude)
    re = rho * speed * lref / mu
    cf = skin_friction(re)
    return (cd0 + cf * swet_ratio) * mach_factor(speed / snd)


@njit(cache=True)
def _deriv(t, seg, x, y, z, vx, vy, vz, m, cds, P):
    """State derivative. cds >= 0 means a parachute with that CD*S is active
    (body drag dropped); cds < 0 means body drag."""
    ax = 0.0
    ay = 0.0
    az = -P[P_G]
    dm = 0.0
    if P[P_THRUST_ON] == 1.0 and seg < 3:
        force = thrust_in_segment(t, seg, P)
        if force > 0.0:
            speed = math.sqrt(vx * vx + vy * vy + vz * vz)
            if speed > 1e-9:
                inv = 1.0 / speed
                dx, dy, dz = vx * inv, vy * inv, vz * inv
            else:
                dx, dy, dz = P[P_UX], P[P_UY], P[P_UZ]
            am = force / m
            ax += am * dx
            ay += am * dy
            az += am * dz
            dm = -force / P[P_ISPG0]
    if P[P_DRAG_ON] == 1.0:
        rx = vx - P[P_WX]
        ry = vy - P[P_WY]
        rz = vz
        speed = math.sqrt(rx * rx + ry * ry + rz * rz)
        if speed > 1e-9:
            rho = density(z)
            if cds >= 0.0:
                coef = 0.5 * rho * speed * cds
            else:
                snd = speed_of_sound(z)
                re = rho * speed * P[P_LREF] / P[P_MU]
                cd = (P[P_CD0] + skin_friction(re) * P[P_SWET]) * mach_factor(speed / snd)
                coef = 0.5 * rho * speed * cd * P[P_AREF]
            inv_m = coef / m
            ax -= inv_m * rx
            ay -= inv_m * ry
            az -= inv_m * rz
    return ax, ay, az, dm


@njit(cache=True)
def _rk4_step(t, h, seg, cds, x, y, z, vx, vy, vz, m, P):
    a1x, a1y, a1z, dm1 = _deriv(t, seg, x, y, z, vx, vy, vz, m, cds, P)
    hh = 0.5 * h
    a2x, a2y, a2z, dm2 = _deriv(
        t + hh, seg,
        x + hh * vx, y + hh * vy, z + hh * vz,
        vx + hh * a1x, vy + hh * a1y, vz + hh * a1z,
        m + hh * dm1, cds, P,
    )
    a3x, a3y, a3z, dm3 = _deriv(
        t + hh, seg,
        x + hh * vx + hh * hh * a1x,
        y + hh * vy + hh * hh * a1y,
        z + hh * vz + hh * hh * a1z,
        vx + hh * a2x, vy + hh * a2y, vz + hh * a2z,
        m + hh * dm2, cds, P,
    )
    # Positions advance with the classic k-stage velocities.
    k1px, k1py, k1pz = vx, vy, vz
    k2px, k2py, k2pz = vx + hh * a1x, vy + hh * a1y, vz + hh * a1z
    k3px, k3py, k3pz = vx + hh * a2x, vy + hh * a2y, vz + hh * a2z
    a4x, a4y, a4z, dm4 = _deriv(
        t + h, seg,
        x + h * k3px, y + h * k3py, z + h * k3pz,
        vx + h * a3x, vy + h * a3y, vz + h * a3z,
        m + h * dm3, cds, P,
    )
    k4px, k4py, k4pz = vx + h * a3x, vy + h * a3y, vz + h * a3z
    sixth = h / 6.0
    nx = x + sixth * (k1px + 2.0 * k2px + 2.0 * k3px + k4px)
    ny = y + sixth * (k1py + 2.0 * k2py + 2.0 * k3py + k4py)
    nz = z + sixth * (k1pz + 2.0 * k2pz + 2.0 * k3pz + k4pz)
    nvx = vx + sixth * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
    nvy = vy + sixth * (a1y + 2.0 * a2y + 2.0 * a3y + a4y)
    nvz = vz + sixth * (a1z + 2.0 * a2z + 2.0 * a3z + a4z)
    nm = m + sixth * (dm1 + 2.0 * dm2 + 2.0 * dm3 + dm4)
    if nm < P[P_MFLOOR]:
        nm = P[P_MFLOOR]
    return nx, ny, nz, nvx, nvy, nvz, nm


@njit(cache=True)
def _event_value(code, x, y, z, vx, vy, vz, alt1, alt2):
    """Event indicator: positive before the event, <= 0 at/after it."""
    if code == EV_APOGEE:
        return vz
    if code == EV_ALT1:
        return z - alt1
    if code == EV_ALT2:
        return z - alt2
    return z  # touchdown


@njit(cache=True)
def _bisect_event(code, t, h, seg, cds, x, y, z, vx, vy, vz, m, P, alt1, alt2):
    """Locate the event time offset within (0, h] by bisection with restart."""
    lo = 0.0
    hi = h
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        nx, ny, nz, nvx, nvy, nvz, nm = _rk4_step(t, mid, seg, cds, x, y, z, vx, vy, vz, m, P)
        if _event_value(code, nx, ny, nz, nvx, nvy, nvz, alt1, alt2) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


@njit(cache=True)
def _track_maxq(t, x, y, z, vx, vy, vz, m, seg, mode, cds, P, maxq):
    if z > maxq[Q_MAXZ]:
        maxq[Q_MAXZ] = z
    rx = vx - P[P_WX]
    ry = vy - P[P_WY]
    speed = math.sqrt(rx * rx + ry * ry + vz * vz)
    rho = density(z)
    q = 0.5 * rho * speed * speed
    if q > maxq[Q_Q]:
        maxq[Q_Q] = q
        maxq[Q_T] = t
        maxq[Q_X] = x
        maxq[Q_Y] = y
        maxq[Q_Z] = z
        maxq[Q_VX] = vx
        maxq[Q_VY] = vy
        maxq[Q_VZ] = vz
        maxq[Q_M] = m
        maxq[Q_SPEED] = speed
        maxq[Q_MACH] = speed / speed_of_sound(z)
        if P[P_THRUST_ON] == 1.0:
            maxq[Q_THRUST] = thrust_in_segment(t, seg, P)
        else:
            maxq[Q_THRUST] = 0.0
        maxq[Q_MODE] = mode


@njit(cache=True)
def advance_free(state, t_start, t_stop, dt, seg, cds, mode,
                 apogee_armed, alt1, alt2, P, maxq, trace, want_trace, max_steps):
    """Advance free flight until an event, t_stop, or the step budget.

    state: float64[7] = (x, y, z, vx, vy, vz, m), updated in place.
    alt1/alt2: altitude triggers (negative = disarmed).
    Returns (t_end, status, trace_rows).
    """
    t = t_start
    x, y, z = state[0], state[1], state[2]
    vx, vy, vz = state[3], state[4], state[5]
    m = state[6]
    rows = 0
    steps = 0
    status = EV_NONE
    while t_stop - t > 1e-12 and steps < max_steps:
        h = dt
        if t + h > t_stop:
            h = t_stop - t
        nx, ny, nz, nvx, nvy, nvz, nm = _rk4_step(t, h, seg, cds, x, y, z, vx, vy, vz, m, P)
        if not (math.isfinite(nx) and math.isfinite(ny) and math.isfinite(nz)
                and math.isfinite(nvx) and math.isfinite(nvy) and math.isfinite(nvz)
                and math.isfinite(nm)):
            x, y, z, vx, vy, vz, m = nx, ny, nz, nvx, nvy, nvz, nm
            t += h
            status = EV_DIVERGED
            break

        # Earliest event in this step wins.
        best_code = EV_NONE
        best_tau = h + 1.0
        if z > 0.0 and nz <= 0.0:
            tau = _bisect_event(EV_TOUCHDOWN, t, h, seg, cds, x, y, z, vx, vy, vz, m, P, alt1, alt2)
            if tau < best_tau:
                best_tau = tau
                best_code = EV_TOUCHDOWN
        if apogee_armed == 1 and vz > 0.0 and nvz <= 0.0:
            tau = _bisect_event(EV_APOGEE, t, h, seg, cds, x, y, z, vx, vy, vz, m, P, alt1, alt2)
            if tau < best_tau:
                best_tau = tau
                best_code = EV_APOGEE
        if alt1 > 0.0 and z > alt1 and nz <= alt1:
            tau = _bisect_event(EV_ALT1, t, h, seg, cds, x, y, z, vx, vy, vz, m, P, alt1, alt2)
            if tau < best_tau:
                best_tau = tau
                best_code = EV_ALT1
        if alt2 > 0.0 and z > alt2 and nz <= alt2:
            tau = _bisect_event(EV_ALT2, t, h, seg, cds, x, y, z, vx, vy, vz, m, P, alt1, alt2)
            if tau < best_tau:
                best_tau = tau
                best_code = EV_ALT2

        if best_code != EV_NONE:
            nx, ny, nz, nvx, nvy, nvz, nm = _rk4_step(
                t, best_tau, seg, cds, x, y, z, vx, vy, vz, m, P)
            x, y, z, vx, vy, vz, m = nx, ny, nz, nvx, nvy, nvz, nm
            t += best_tau
            status = best_code
            break

        x, y, z, vx, vy, vz, m = nx, ny, nz, nvx, nvy, nvz, nm
        t += h
        steps += 1
        _track_maxq(t, x, y, z, vx, vy, vz, m, seg, mode, cds, P, maxq)
        if want_trace == 1:
            trace[rows, 0] = t
            trace[rows, 1] = x
            trace[rows, 2] = y
            trace[rows, 3] = z
            trace[rows, 4] = vx
            trace[rows, 5] = vy
            trace[rows, 6] = vz
            trace[rows, 7] = m
            rows += 1
        if t_stop - t <= 1e-12:
            t = t_stop

    if status != EV_NONE:
        _track_maxq(t, x, y, z, vx, vy, vz, m, seg, mode, cds, P, maxq)
        if want_trace == 1:
            trace[rows, 0] = t
            trace[rows, 1] = x
            trace[rows, 2] = y
            trace[rows, 3] = z
            trace[rows, 4] = vx
            trace[rows, 5] = vy
            trace[rows, 6] = vz
            trace[rows, 7] = m
            rows += 1
    state[0], state[1], state[2] = x, y, z
    state[3], state[4], state[5] = vx, vy, vz
    state[6] = m
    return t, status, rows


@njit(cache=True)
def _rail_deriv(t, seg, v, m, P, wind_along):
    force = 0.0
    if P[P_THRUST_ON] == 1.0 and seg < 3:
        force = thrust_in_segment(t, seg, P)
    dm = -force / P[P_ISPG0] if force > 0.0 else 0.0
    accel = force / m - P[P_G] * P[P_UZ]
    if P[P_DRAG_ON] == 1.0:
        rel = v - wind_along
        # Full relative wind magnitude for q; only the axial component loads the rail.
        rx = P[P_UX] * v - P[P_WX]
        ry = P[P_UY] * v - P[P_WY]
        rz = P[P_UZ] * v
        speed = math.sqrt(rx * rx + ry * ry + rz * rz)
        if speed > 1e-9:
            # Rails are a few meters long; ground-level air is accurate enough.
            rho = density(0.0)
            snd = speed_of_sound(0.0)
            re = rho * speed * P[P_LREF] / P[P_MU]
            cd = (P[P_CD0] + skin_friction(re) * P[P_SWET]) * mach_factor(speed / snd)
            accel -= 0.5 * rho * speed * cd * P[P_AREF] * rel / m
    return accel, dm


@njit(cache=True)
def _rail_rk4(t, h, seg, s, v, m, P, wind_along):
    a1, dm1 = _rail_deriv(t, seg, v, m, P, wind_along)
    hh = 0.5 * h
    a2, dm2 = _rail_deriv(t + hh, seg, v + hh * a1, m + hh * dm1, P, wind_along)
    a3, dm3 = _rail_deriv(t + hh, seg, v + hh * a2, m + hh * dm2, P, wind_along)
    a4, dm4 = _rail_deriv(t + h, seg, v + h * a3, m + h * dm3, P, wind_along)
    sixth = h / 6.0
    ns = s + sixth * (v + 2.0 * (v + hh * a1) + 2.0 * (v + hh * a2) + (v + h * a3))
    nv = v + sixth * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    nm = m + sixth * (dm1 + 2.0 * dm2 + 2.0 * dm3 + dm4)
    if nm < P[P_MFLOOR]:
        nm = P[P_MFLOOR]
    return ns, nv, nm


@njit(cache=True)
def advance_rail(state, t_start, t_stop, dt, seg, P, rail_length,
                 maxq, trace, want_trace, max_steps):
    """Advance the rail slide. state: float64[3] = (s, v, m), in place.

    Returns (t_end, status, trace_rows); status EV_RAIL_EXIT when the travel
    reaches rail_length, EV_RAIL_STALL if the rocket stops on the rail.
    """
    t = t_start
    s, v, m = state[0], state[1], state[2]
    wind_along = P[P_UX] * P[P_WX] + P[P_UY] * P[P_WY]
    rows = 0
    steps = 0
    status = EV_NONE
    while t_stop - t > 1e-12 and steps < max_steps:
        h = dt
        if t + h > t_stop:
            h = t_stop - t
        ns, nv, nm = _rail_rk4(t, h, seg, s, v, m, P, wind_along)
        if ns >= rail_length:
            lo = 0.0
            hi = h
            while hi - lo > _BISECT_TOL:
                mid = 0.5 * (lo + hi)
                ms, mv, mm = _rail_rk4(t, mid, seg, s, v, m, P, wind_along)
                if ms < rail_length:
                    lo = mid
                else:
                    hi = mid
            s, v, m = _rail_rk4(t, hi, seg, s, v, m, P, wind_along)
            t += hi
            status = EV_RAIL_EXIT
            break
        if nv <= 0.0:
            s, v, m = ns, 0.0, nm
            t += h
            status = EV_RAIL_STALL
            break
        s, v, m = ns, nv, nm
        t += h
        steps += 1
        _track_maxq(t, P[P_UX] * s, P[P_UY] * s, P[P_UZ] * s,
                    P[P_UX] * v, P[P_UY] * v, P[P_UZ] * v, m, seg, 0.0, -1.0, P, maxq)
        if want_trace == 1:
            trace[rows, 0] = t
            trace[rows, 1] = P[P_UX] * s
            trace[rows, 2] = P[P_UY] * s
            trace[rows, 3] = P[P_UZ] * s
            trace[rows, 4] = P[P_UX] * v
            trace[rows, 5] = P[P_UY] * v
            trace[rows, 6] = P[P_UZ] * v
            trace[rows, 7] = m
            rows += 1
        if t_stop - t <= 1e-12:
            t = t_stop
    if status == EV_RAIL_EXIT or status == EV_RAIL_STALL:
        _track_maxq(t, P[P_UX] * s, P[P_UY] * s, P[P_UZ] * s,
                    P[P_UX] * v, P[P_UY] * v, P[P_UZ] * v, m, seg, 0.0, -1.0, P, maxq)
        if want_trace == 1:
            trace[rows, 0] = t
            trace[rows, 1] = P[P_UX] * s
            trace[rows, 2] = P[P_UY] * s
            trace[rows, 3] = P[P_UZ] * s
            trace[rows, 4] = P[P_UX] * v
            trace[rows, 5] = P[P_UY] * v
            trace[rows, 6] = P[P_UZ] * v
            trace[rows, 7] = m
            rows += 1
    state[0], state[1], state[2] = s, v, m
    return t, status, rows
