import ast
import inspect
from math import exp

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockdilation import reference_oracles as oracles


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 5), st.integers(0, 8))
def test_truncated_series_below_exponential(x, cutoff):
    o = oracles.CoherentOracle(1.0, cutoff)
    assert oracles.S(x, cutoff) <= exp(x) * (1 + 1e-15)
    assert o.tail(x) >= -1e-12 * exp(x)


def test_coherent_oracle_values():
    o = oracles.CoherentOracle(1 + 1j, 2)
    assert o.norm_squared(0.5) == pytest.approx(1 + 1 + 0.5)
    assert o.inner(1 + 1j, 0.5) == pytest.approx(2.5)
    assert o.inner(0, 0.5) == 1


def test_closed_form_examples():
    for m in (4, 8):
        assert oracles.closed_form_m2(0, m, 3) == pytest.approx(1.0)
    assert oracles.limit_m2(1.0) == pytest.approx(1 - exp(-1))
    assert oracles.limit_m2(0) == 1
    # large cutoff, fine grid approaches the analytic limit from the right-endpoint side
    assert abs(oracles.closed_form_m2(1.0, 2048, 20) - (1 - exp(-1))) <= 1e-3
    assert oracles.continuum_m2(1.0, 3) == pytest.approx((1 + 1 / 2 + 1 / 6 + 1 / 24) / (1 + 1 + 1 / 2 + 1 / 6))
    assert oracles.continuum_m2(1.0, 30) == pytest.approx(1 - exp(-1), abs=1e-12)


def test_closed_form_first_order_in_h():
    limit = oracles.continuum_m2(1.0, 3)
    errs = [abs(oracles.closed_form_m2(1.0, m, 3) - limit) for m in (8, 16, 32, 64)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(1.9 <= r <= 2.1 for r in ratios)


def test_isometry_defect_bound():
    assert oracles.isometry_defect_bound(0, 1, 3) == 0
    assert oracles.isometry_defect_bound(1.0, 1, 2) == pytest.approx(0.6)
    assert oracles.isometry_defect_bound(1.0, 2, 3) > oracles.isometry_defect_bound(1.0, 1, 3)


def test_tensor_power_inner_matches_series():
    rng = np.random.default_rng(0)
    phi = rng.normal(size=3) + 1j * rng.normal(size=3)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert oracles.tensor_power_exponential_inner(phi, psi, 4) == pytest.approx(oracles.S(np.vdot(phi, psi), 4))


def test_occupation_dimension():
    assert oracles.occupation_dimension(0, 3) == 1
    assert oracles.occupation_dimension(2, 2) == 6
    assert oracles.occupation_dimension(3, 1) == 4


def test_section_overlap_same_unit_is_one():
    assert oracles.section_overlap(0.4 - 1j, 0.4 - 1j, 8, 3) == pytest.approx(1.0)
    assert oracles.section_overlap(0, 0, 8, 3) == pytest.approx(1.0)


def test_spatial_dagger_examples():
    assert oracles.spatial_dagger_value(0, 0, 1, 8, 2) == pytest.approx(1.0, abs=1e-14)
    for c in (0.5, 1.0, 0.3 + 0.9j):
        v = oracles.spatial_dagger_value(c, c, 1, 8, 3)
        tail = oracles.same_unit_dagger_tail(c, 1, 8, 3)
        assert v <= 1 + 1e-12
        assert 1 - v <= tail + 1e-12
    v = oracles.spatial_dagger_value(0, 1.0, 1, 8, 2)
    assert 0 < v < 1


def test_dense_adjoint_oracle_guard():
    with pytest.raises(ValueError):
        oracles.dense_adjoint_oracle([np.ones(100)], 0.5, 60)


def test_oracles_do_not_import_the_package():
    tree = ast.parse(inspect.getsource(oracles))
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            assert node.level == 0 and not (node.module or "").startswith("fockdilation")
        if isinstance(node, ast.Import):
            assert all(not a.name.startswith("fockdilation") for a in node.names)
