import math

import numpy as np
import pytest

from lrkitaev.client import ServiceUsageError, make_client, post


@pytest.fixture(scope="module")
def client():
    with make_client(None) as c:
        yield c


def test_health(client):
    data = client.get("/api/health").json()
    assert data["status"] == "ok"
    assert data["version"]


def test_spectrum_row_count_contract(client):
    data = post(
        client,
        "/api/spectrum",
        {"n": 16, "alpha": 3.0, "epsilon": -0.2, "theta_points": 7},
    )
    # theta points x positive modes
    assert len(data["rows"]) == 7 * 16
    thetas = sorted({r["theta_over_pi"] for r in data["rows"]})
    assert thetas[0] == pytest.approx(1 / 8)
    assert thetas[-1] == pytest.approx(7 / 8)


def test_spectrum_rejects_oversized_window(client):
    with pytest.raises(ServiceUsageError):
        post(
            client,
            "/api/spectrum",
            {"n": 16, "alpha": 3.0, "epsilon": -0.2, "theta_points": 3, "window_size": 9},
        )


def test_lanczos_endpoint_round_trip(client):
    payload = {
        "params": {"n": 30, "alpha": 2.0, "theta": 0.4 * math.pi, "epsilon": -0.2},
        "seed": "gamma1",
    }
    data = post(client, "/api/lanczos", payload)
    for rep in ("majorana", "nambu"):
        record = data[rep]
        assert record["representation"] == rep
        assert record["n_stable"] == len(record["b"])
        assert record["a_max"] <= 1e-12
        assert record["termination_reason"]
    depth = data["mutual_stable_depth"]
    assert depth >= 1
    b_m = np.array(data["majorana"]["b"][:depth])
    b_n = np.array(data["nambu"]["b"][:depth])
    assert np.abs(b_m - b_n).max() <= data["cross_check_tol"]


def test_lanczos_rejects_unknown_seed(client):
    with pytest.raises(ServiceUsageError):
        post(
            client,
            "/api/lanczos",
            {
                "params": {"n": 10, "alpha": 1.0, "theta": 1.0, "epsilon": 0.0},
                "seed": "sigma1",
            },
        )


def test_diagnose_endpoint(client):
    payload = {
        "params": {"n": 40, "alpha": 2.0, "theta": 0.4 * math.pi, "epsilon": -0.2},
        "seed": "gamma1",
        "eta_tol": 0.0,
    }
    data = post(client, "/api/diagnose", payload)
    assert data["krylov_phase"] in ("edge", "bulk")
    assert data["n_cross"] >= 0
    assert data["entries"][0]["n"] == 2
    signs = [e["sign"] for e in data["entries"]]
    assert set(signs) <= {-1, 0, 1}


def test_oracle_endpoint_and_cap(client):
    data = post(
        client,
        "/api/oracle",
        {"n": 2, "alpha": 1.0, "theta": 1.0, "epsilon": 0.3, "seed": "gamma1"},
    )
    assert data["closure_residual"] <= 1e-12
    assert data["manybody_krylov_dimension"] <= data["krylov_dimension_bound"]
    with pytest.raises(ServiceUsageError):
        post(
            client,
            "/api/oracle",
            {"n": 5, "alpha": 1.0, "theta": 1.0, "epsilon": 0.3, "seed": "gamma1"},
        )


def test_sweep_points_endpoint(client):
    spec = {
        "n": 16,
        "epsilon": -0.2,
        "seed": "gamma1",
        "alpha_points": 3,
        "theta_points": 3,
        "alpha_max": 3.0,
    }
    data = post(
        client,
        "/api/sweep/points",
        {"spec": spec, "cells": [[1, 1], [3, 3]], "workers": 1},
    )
    assert len(data["points"]) == 2
    point = data["points"][0]
    assert point["i"] == 1 and point["j"] == 1
    assert point["krylov_phase"] in ("edge", "bulk")
    assert set(point["gap_phase"]) == {"w005", "w010", "w050"}

    with pytest.raises(ServiceUsageError):
        post(client, "/api/sweep/points", {"spec": spec, "cells": [[4, 1]], "workers": 1})


def test_infinite_gap_encoded_as_null(client):
    # tiny chain with a high threshold: edge class can be empty -> None on the wire
    spec = {
        "n": 16,
        "epsilon": -1.0,
        "seed": "gamma1",
        "alpha_points": 1,
        "theta_points": 1,
        "alpha_max": 3.0,
        "thresholds": [0.999],
        "primary_threshold": 0.999,
    }
    data = post(client, "/api/sweep/points", {"spec": spec, "cells": [[1, 1]], "workers": 1})
    deltas = data["points"][0]["delta_edge"]
    assert set(deltas) == {"w100"}
