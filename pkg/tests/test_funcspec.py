import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracgap.errors import DomainError
from fracgap.funcspec import (
    builtin_catalog,
    identity_spec,
    log2_spec,
    lookup,
    make_reciprocal,
    reciprocal_power,
    scaled_reciprocal,
    sqrt_spec,
    validate,
    FuncSpec,
    INCREASING,
)
from fracgap.numerics import adaptive_integral


def test_catalog_contents():
    names = {s.name for s in builtin_catalog()}
    assert {"identity", "sqrt", "log", "log2", "log3", "4/x", "2x^(-1/2)"} <= names


def test_identity_examples():
    ident = identity_spec()
    assert float(ident.eval(2.5)) == 2.5
    assert float(ident.antideriv_eval(2.0)) == 2.0  # x^2/2 at 2


def test_sqrt_inverse():
    assert float(sqrt_spec().inverse_eval(3.0)) == 9.0


def test_log2_antideriv_matches_quadrature():
    spec = log2_spec()
    res = adaptive_integral(spec.eval, 2.0, 10.0, tol=1e-10)
    assert res.converged
    closed = float(spec.antideriv_eval(10.0)) - float(spec.antideriv_eval(2.0))
    assert closed == pytest.approx(res.value, abs=1e-8)


@pytest.mark.parametrize(
    "base_name,numer,x,gx",
    [("identity", 5.0, 2.0, 2.5), ("log", 10.0, math.e, 10.0), ("sqrt", 6.0, 4.0, 3.0)],
)
def test_make_reciprocal_examples(base_name, numer, x, gx):
    g = make_reciprocal(lookup(base_name), numer)
    assert float(g.eval(x)) == pytest.approx(gx, rel=1e-15)
    assert float(g.inverse_eval(gx)) == pytest.approx(x, rel=1e-12)
    assert g.direction == "decreasing"
    assert g.numerator == numer


def test_make_reciprocal_rejects_bad_inputs():
    with pytest.raises(DomainError):
        make_reciprocal(scaled_reciprocal(4.0), 2.0)  # decreasing base
    with pytest.raises(DomainError):
        make_reciprocal(identity_spec(), 0.0)
    with pytest.raises(DomainError):
        make_reciprocal(identity_spec(), -3.0)


def test_reciprocal_power_family():
    spec = reciprocal_power(2.0, 2)
    assert float(spec.eval(4.0)) == 1.0
    assert float(spec.inverse_eval(1.0)) == 4.0
    with pytest.raises(DomainError):
        reciprocal_power(2.0, 1)
    with pytest.raises(DomainError):
        reciprocal_power(-1.0, 2)


def test_lookup_families_and_unknown():
    assert lookup("4/x").name == "4/x"
    assert lookup("2.5/x").name == "2.5/x"
    assert lookup("3x^(-1/4)").name == "3x^(-1/4)"
    with pytest.raises(DomainError):
        lookup("tan")


class TestValidate:
    def test_identity_grid_passes_exactly(self):
        report = validate(identity_spec(), [1.0, 2.0, 4.0, 8.0])
        assert report.passed
        assert report.max_roundtrip_error == 0.0
        assert report.monotone_violations == 0
        assert report.max_antideriv_fd_error <= 1e-10

    def test_sqrt_grid_passes(self):
        assert validate(sqrt_spec(), [1.0, 4.0, 9.0]).passed

    def test_broken_antiderivative_fails_with_expected_error(self):
        base = sqrt_spec()
        broken = FuncSpec(
            name="sqrt-broken",
            direction=INCREASING,
            domain=base.domain,
            eval=base.eval,
            inverse_eval=base.inverse_eval,
            antideriv_eval=lambda x: np.asarray(x, dtype=np.float64),  # F' = 1 != sqrt
        )
        grid = [4.0, 9.0, 16.0]
        report = validate(broken, grid)
        assert not report.passed
        expected = max(abs(1.0 - math.sqrt(x)) / math.sqrt(x) for x in grid)
        assert report.max_antideriv_fd_error == pytest.approx(expected, rel=1e-3)

    def test_empty_grid_rejected(self):
        with pytest.raises(DomainError):
            validate(identity_spec(), [])

    def test_out_of_domain_rejected(self):
        with pytest.raises(DomainError):
            validate(lookup("log"), [0.5, 2.0])


@pytest.mark.parametrize("name", ["identity", "sqrt", "log", "log2", "log3"])
@given(x=st.floats(min_value=1.5, max_value=1e6))
@settings(max_examples=100, deadline=None)
def test_roundtrip_property(name, x):
    spec = lookup(name)
    back = float(spec.inverse_eval(spec.eval(x)))
    assert abs(back - x) <= 1e-9 * (1.0 + abs(x))


@given(
    a=st.floats(min_value=0.5, max_value=50.0),
    x=st.floats(min_value=0.1, max_value=1e4),
)
@settings(max_examples=100, deadline=None)
def test_scaled_reciprocal_roundtrip(a, x):
    spec = scaled_reciprocal(a)
    assert float(spec.inverse_eval(spec.eval(x))) == pytest.approx(x, rel=1e-12)


def test_reciprocal_spec_validates():
    # grid stays above 2 so the li-backed antiderivative can take FD steps
    g = make_reciprocal(lookup("log"), 10.0)
    report = validate(g, [2.5, math.e, 5.0, 50.0, 1000.0])
    assert report.passed
    assert report.monotone_violations == 0  # strictly decreasing where f > 0


def test_catalog_grids_validate():
    grids = {
        "identity": [0.5, 1.0, 3.0, 10.0, 250.0],
        "sqrt": [0.25, 1.0, 2.0, 9.0, 144.0],
        "log": [1.5, 2.0, math.e, 10.0, 1e4],
        "log2": [1.5, 2.0, 7.0, 90.0, 1e5],
        "log3": [1.5, 2.0, 7.0, 90.0, 1e5],
        "4/x": [0.5, 1.0, 2.0, 8.0, 40.0],
        "2x^(-1/2)": [0.5, 1.0, 2.0, 8.0, 40.0],
    }
    for spec in builtin_catalog():
        assert validate(spec, grids[spec.name]).passed, spec.name
