"""Fixed tables of commercially available motors and structural materials.

Both catalogs are loaded once from the delimiter-separated tables shipped in
``rocketeval/data`` and are immutable afterwards; lookups are plain dict reads
and safe for concurrent use.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

MOTORS_HEADER = (
    "Name,Manufacturer,Radius (m),Length (m),Dry Mass (kg),Max Thrust (N),"
    "Avg Thrust (N),Burn Time (s),Total Impulse (Ns),Isp (s),Cost ($)"
)
MATERIALS_HEADER = "Name,Density (kg/m^3),Yield Strength (Pa),Unit Price ($/m^3)"

# Env var pointing at a directory with alternative motors.csv/materials.csv.
CATALOG_DIR_ENV = "ROCKETEVAL_CATALOG_DIR"

STANDARD_GRAVITY = 9.80665  # m/s^2


class UnknownMotorError(KeyError):
    """Motor name not present in the catalog (an invalid design, not a bug)."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown motor: {self.name!r}"


class UnknownMaterialError(KeyError):
    """Material name not in the catalog; matching is case-sensitive."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown material: {self.name!r}"


class CatalogFormatError(ValueError):
    """Catalog table file is malformed (bad header or row)."""


@dataclass(frozen=True)
class MotorSpec:
    name: str
    manufacturer: str
    radius: float        # m
    length: float        # m
    dry_mass: float      # kg
    max_thrust: float    # N
    avg_thrust: float    # N
    burn_time: float     # s
    total_impulse: float  # N*s
    isp: float           # s
    cost: float          # USD

    @property
    def propellant_mass(self) -> float:
        """Propellant mass implied by total impulse and Isp (kg)."""
        return self.total_impulse / (self.isp * STANDARD_GRAVITY)


@dataclass(frozen=True)
class MaterialSpec:
    name: str
    density: float         # kg/m^3
    yield_strength: float  # Pa
    unit_price: float      # USD/m^3


@dataclass(frozen=True)
class Catalog:
    motors: dict[str, MotorSpec]
    materials: dict[str, MaterialSpec]
    motors_table_text: str  # verbatim file content, embedded in task briefs

    def motor(self, name: str) -> MotorSpec:
        try:
            return self.motors[name]
        except KeyError:
            raise UnknownMotorError(name) from None

    def material(self, name: str) -> MaterialSpec:
        try:
            return self.materials[name]
        except KeyError:
            raise UnknownMaterialError(name) from None

    @property
    def motor_names(self) -> tuple[str, ...]:
        return tuple(self.motors)

    @property
    def material_names(self) -> tuple[str, ...]:
        return tuple(self.materials)


def _read_rows(text: str, expected_header: str, path: str) -> list[list[str]]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CatalogFormatError(f"{path}: empty table")
    if lines[0] != expected_header:
        raise CatalogFormatError(
            f"{path}: bad header\n  expected: {expected_header}\n  found:    {lines[0]}"
        )
    return [[cell.strip() for cell in ln.split(",")] for ln in lines[1:]]


def _load_motors(text: str, path: str) -> dict[str, MotorSpec]:
    motors: dict[str, MotorSpec] = {}
    for row in _read_rows(text, MOTORS_HEADER, path):
        if len(row) != 11:
            raise CatalogFormatError(f"{path}: expected 11 columns, got {len(row)}: {row}")
        m = MotorSpec(
            name=row[0],
            manufacturer=row[1],
            radius=float(row[2]),
            length=float(row[3]),
            dry_mass=float(row[4]),
            max_thrust=float(row[5]),
            avg_thrust=float(row[6]),
            burn_time=float(row[7]),
            total_impulse=float(row[8]),
            isp=float(row[9]),
            cost=float(row[10]),
        )
        _check_motor(m, path)
        motors[m.name] = m
    return motors


def _check_motor(m: MotorSpec, path: str) -> None:
    for field in ("radius", "length", "dry_mass", "max_thrust", "avg_thrust",
                  "burn_time", "total_impulse", "isp", "cost"):
        if getattr(m, field) <= 0.0:
            raise CatalogFormatError(f"{path}: {m.name}: {field} must be > 0")
    if m.avg_thrust > m.max_thrust:
        raise CatalogFormatError(f"{path}: {m.name}: avg thrust exceeds max thrust")
    nominal = m.avg_thrust * m.burn_time
    if abs(m.total_impulse - nominal) > 0.10 * nominal:
        raise CatalogFormatError(
            f"{path}: {m.name}: total impulse {m.total_impulse} inconsistent with "
            f"avg thrust x burn time {nominal:.1f}"
        )


def _load_materials(text: str, path: str) -> dict[str, MaterialSpec]:
    materials: dict[str, MaterialSpec] = {}
    for row in _read_rows(text, MATERIALS_HEADER, path):
        if len(row) != 4:
            raise CatalogFormatError(f"{path}: expected 4 columns, got {len(row)}: {row}")
        mat = MaterialSpec(
            name=row[0],
            density=float(row[1]),
            yield_strength=float(row[2]),
            unit_price=float(row[3]),
        )
        if mat.density <= 0 or mat.yield_strength <= 0 or mat.unit_price < 0:
            raise CatalogFormatError(f"{path}: {mat.name}: non-physical constants")
        materials[mat.name] = mat
    return materials


def load_catalog(directory: str | Path | None = None) -> Catalog:
    """Load the catalog from `directory`, the env override, or package data."""
    if directory is None:
        directory = os.environ.get(CATALOG_DIR_ENV)
    if directory is not None:
        directory = Path(directory)
        motors_text = (directory / "motors.csv").read_text()
        materials_text = (directory / "materials.csv").read_text()
        motors_path = str(directory / "motors.csv")
        materials_path = str(directory / "materials.csv")
    else:
        data = resources.files("rocketeval.data")
        motors_text = (data / "motors.csv").read_text()
        materials_text = (data / "materials.csv").read_text()
        motors_path = "rocketeval/data/motors.csv"
        materials_path = "rocketeval/data/materials.csv"
    return Catalog(
        motors=_load_motors(motors_text, motors_path),
        materials=_load_materials(materials_text, materials_path),
        motors_table_text=motors_text,
    )


_default: Catalog | None = None


def default_catalog() -> Catalog:
    """The catalog shipped with the package (respects the env override)."""
    global _default
    if _default is None:
        _default = load_catalog()
    return _default


def lookup_motor(name: str, catalog: Catalog | None = None) -> MotorSpec:
    return (catalog or default_catalog()).motor(name)


def lookup_material(name: str, catalog: Catalog | None = None) -> MaterialSpec:
    return (catalog or default_catalog()).material(name)
