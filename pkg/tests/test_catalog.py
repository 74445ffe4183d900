import pytest

from rocketeval.catalog import (MATERIALS_HEADER, MOTORS_HEADER, CatalogFormatError,
                                UnknownMaterialError, UnknownMotorError,
                                _load_materials, _load_motors, lookup_material,
                                lookup_motor)

APPENDIX_MOTOR_COSTS = {
    "Pro75M1670": 520.0,
    "AeroTechK700W": 180.0,
    "CesaroniM1670": 550.0,
    "AeroTechH128W": 65.0,
    "CesaroniO3700": 1250.0,
    "CesaroniO5800": 1100.0,
    "CesaroniK160": 130.0,
}

MATERIAL_NAMES = {"aluminum", "composite", "fiberglass", "carbon_fiber",
                  "balsa_wood", "plywood", "ABS_plastic"}


def test_all_seven_motors_present(catalog):
    assert set(catalog.motor_names) == set(APPENDIX_MOTOR_COSTS)


def test_motor_costs_exact(catalog):
    for name, cost in APPENDIX_MOTOR_COSTS.items():
        assert catalog.motor(name).cost == cost


def test_lookup_pro75(catalog):
    m = lookup_motor("Pro75M1670", catalog)
    assert m.radius == 0.075
    assert m.avg_thrust == 1533.9
    assert m.burn_time == 3.9
    assert m.cost == 520.0


def test_lookup_o5800(catalog):
    m = lookup_motor("CesaroniO5800", catalog)
    assert m.total_impulse == 30382.7
    assert m.cost == 1100.0


def test_unknown_motor_error(catalog):
    with pytest.raises(UnknownMotorError) as err:
        lookup_motor("NoSuchMotor", catalog)
    assert "NoSuchMotor" in str(err.value)


def test_motor_invariants(catalog):
    for m in catalog.motors.values():
        assert m.avg_thrust <= m.max_thrust
        for value in (m.radius, m.length, m.dry_mass, m.max_thrust,
                      m.avg_thrust, m.burn_time, m.total_impulse, m.isp, m.cost):
            assert value > 0.0
        nominal = m.avg_thrust * m.burn_time
        assert abs(m.total_impulse - nominal) <= 0.10 * nominal


def test_material_name_set_exact(catalog):
    assert set(catalog.material_names) == MATERIAL_NAMES


def test_lookup_material_constants(catalog):
    cf = lookup_material("carbon_fiber", catalog)
    assert cf.density == 1550.0
    assert cf.yield_strength == 5.0e8
    assert cf.unit_price == 78000.0


def test_material_lookup_case_sensitive(catalog):
    with pytest.raises(UnknownMaterialError):
        lookup_material("Carbon_Fiber", catalog)


def test_material_density_ordering(catalog):
    assert (lookup_material("balsa_wood", catalog).density
            < lookup_material("aluminum", catalog).density)


def test_material_invariants(catalog):
    for mat in catalog.materials.values():
        assert mat.density > 0.0
        assert mat.yield_strength > 0.0
        assert mat.unit_price >= 0.0


def test_repeated_lookups_referentially_transparent(catalog):
    assert lookup_motor("CesaroniK160", catalog) is lookup_motor("CesaroniK160", catalog)
    assert lookup_material("plywood", catalog) is lookup_material("plywood", catalog)


def test_loader_rejects_bad_header():
    with pytest.raises(CatalogFormatError):
        _load_motors("Name,Radius\nfoo,1", "test")
    with pytest.raises(CatalogFormatError):
        _load_materials(MATERIALS_HEADER.lower() + "\nx,1,1,1", "test")


def test_loader_rejects_inconsistent_motor():
    row = "Bad,X,0.05,0.5,1.0,100.0,99.0,2.0,500.0,180.0,100.0"  # impulse >> avg*burn
    with pytest.raises(CatalogFormatError):
        _load_motors(MOTORS_HEADER + "\n" + row, "test")
