"""Shared fixtures: seeded RNG and random physical parameter draws."""

import math

import numpy as np
import pytest

from gauge_squeeze import SystemParams, baseline_params, stability_report, build_system


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def baseline():
    return baseline_params()


def draw_params(rng, stable_only=True, detuned_both_ways=False, max_tries=200):
    """One random draw from the physical parameterization.

    Red-sideband draws with moderate couplings are almost always stable;
    ``detuned_both_ways`` widens detunings and couplings to produce a
    healthy unstable fraction for stability cross-checks.
    """
    for _ in range(max_tries):
        lam = rng.uniform(0.0, 8.0)
        eta = 1e-4
        kwargs = dict(
            omega_m=1.0,
            g_m=1e-4,
            kappa=rng.uniform(0.01, 0.5),
            gamma_a=rng.uniform(0.05, 1.0),
            gamma_m=10.0 ** rng.uniform(-4, -2),
            eta=eta,
            n_th=rng.uniform(0.0, 300.0),
            G_m=rng.uniform(0.0, 0.2),
            G_a=rng.uniform(0.0, 0.2),
            J_m=rng.uniform(0.0, 0.2),
            theta=rng.uniform(0.0, 2.0 * math.pi),
            Delta_a=rng.uniform(0.5, 5.0),
            Delta_tilde="red-sideband",
            beta_m_re=math.sqrt(lam / (24.0 * eta)),
        )
        if detuned_both_ways:
            kwargs.update(
                G_m=rng.uniform(0.0, 0.6),
                G_a=rng.uniform(0.0, 0.6),
                J_m=rng.uniform(0.0, 0.6),
                Delta_a=rng.uniform(-5.0, 5.0),
                Delta_tilde=rng.uniform(-5.0, 5.0),
            )
        params = SystemParams(**kwargs)
        if not stable_only:
            return params
        _, drift, _ = build_system(params)
        if stability_report(drift).stable:
            return params
    raise AssertionError("could not draw a stable parameter set")


@pytest.fixture
def stable_draw():
    return lambda rng: draw_params(rng, stable_only=True)


@pytest.fixture
def any_draw():
    return lambda rng: draw_params(rng, stable_only=False, detuned_both_ways=True)
