import numpy as np
import pytest
from hypothesis import given, strategies as st

from lrkitaev.diagnostics import (
    DiagnosticsConfig,
    crossing_count,
    krylov_phase,
    staggering,
)
from lrkitaev.lanczos import LanczosRun, SeedSpec, StabilityReport
from lrkitaev.model import ModelParams, build_coupling_matrices, build_majorana_generator


def _run_from_b(b):
    b = np.asarray(b, dtype=float)
    return LanczosRun(
        representation="majorana",
        seed=SeedSpec(terms=((1, 1.0),), label="gamma1"),
        a=np.zeros_like(b),
        b=b,
        n_stable=len(b),
        stability=StabilityReport("MaxSteps", len(b), np.zeros(len(b))),
    )


def test_constant_sequence_has_no_crossings():
    series = staggering(_run_from_b(np.ones(8)))
    assert np.all(series.values == 0.0)
    assert np.all(series.signs == 0)
    assert series.n_cross == 0


def test_constructed_sign_pattern():
    # window n = 2..5 of b_1..b_10: ratios 2, 3, 1/2, 1/3
    b = [5.0, 5.0, 2.0, 1.0, 3.0, 1.0, 1.0, 2.0, 1.0, 3.0]
    series = staggering(_run_from_b(b))
    np.testing.assert_array_equal(series.pair_indices, [2, 3, 4, 5])
    np.testing.assert_allclose(
        series.values, [np.log(2), np.log(3), -np.log(2), -np.log(3)]
    )
    np.testing.assert_array_equal(series.signs, [1, 1, -1, -1])
    assert series.n_cross == 1


def test_crossing_count_examples():
    assert crossing_count([1, 1, 1]) == 0
    assert crossing_count([1, 0, -1, 0, 1]) == 2
    assert crossing_count([]) == 0
    assert crossing_count([0, 0]) == 0


def test_phase_map():
    assert krylov_phase(0) == "bulk"
    assert krylov_phase(1) == "edge"
    assert krylov_phase(5) == "edge"


def test_window_respects_stable_depth():
    # depth 9 leaves pairs up to n = 4; no b beyond the window is touched
    b = np.concatenate([np.ones(9), np.full(5, np.nan)])
    run = _run_from_b(b)
    series = staggering(run, n_stable=9)
    assert series.pair_indices.max() == 4
    assert np.isfinite(series.values).all()


def test_empty_window_rejected():
    with pytest.raises(ValueError):
        staggering(_run_from_b(np.ones(3)))
    with pytest.raises(ValueError):
        staggering(_run_from_b(np.ones(20)), DiagnosticsConfig(n_min=6), n_stable=8)


def test_config_validation():
    with pytest.raises(ValueError):
        DiagnosticsConfig(eta_tol=-1.0)
    with pytest.raises(ValueError):
        DiagnosticsConfig(n_min=1)


def test_scale_invariance(rng):
    b = rng.uniform(0.5, 2.0, size=40)
    base = staggering(_run_from_b(b))
    scaled = staggering(_run_from_b(17.3 * b))
    np.testing.assert_allclose(scaled.values, base.values, atol=1e-12)
    assert scaled.n_cross == base.n_cross


@given(st.lists(st.sampled_from([-1, 0, 1]), max_size=60))
def test_zero_filter_idempotence(signs):
    # inserting zeros anywhere never changes the count
    base = crossing_count(signs)
    rng = np.random.default_rng(abs(hash(tuple(signs))) % 2**32)
    padded = []
    for s in signs:
        padded.extend([0] * int(rng.integers(0, 3)))
        padded.append(s)
    padded.extend([0] * int(rng.integers(0, 3)))
    assert crossing_count(padded) == base
    assert crossing_count([s for s in signs if s != 0]) == base


@given(
    st.lists(
        st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
        min_size=0,
        max_size=50,
    ),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_tolerance_monotonicity(values, tol_a, tol_b):
    # raising the tolerance can only remove crossings
    lo, hi = sorted((tol_a, tol_b))

    def count_at(tol):
        signs = [0 if abs(v) <= tol else (1 if v > 0 else -1) for v in values]
        return crossing_count(signs)

    assert count_at(hi) <= count_at(lo)


def _full_scale_ncross(alpha, theta_over_pi):
    from lrkitaev.lanczos import LanczosConfig, lanczos_nambu
    from lrkitaev.model import build_bdg

    params = ModelParams(n=1000, alpha=alpha, theta=theta_over_pi * np.pi, epsilon=-0.2)
    c = build_coupling_matrices(params)
    run = lanczos_nambu(build_bdg(c), SeedSpec.from_string("gamma1", params.n))
    return staggering(run).n_cross


@pytest.mark.slow
def test_full_scale_bulk_point_has_no_crossings():
    assert _full_scale_ncross(2.0, 0.1) == 0


@pytest.mark.slow
def test_full_scale_edge_point_has_crossings():
    assert _full_scale_ncross(2.0 / 3.0, 0.4) >= 1
