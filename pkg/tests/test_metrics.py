import math

import numpy as np
import pytest

import oracles
from qscissors import metrics
from qscissors.amplifiers import AmplifierConfig, Variant, two_photon_sign_shift
from qscissors.fock import coherent_truncated, fock_state, superposition


def test_fidelity_of_exact_coherent_is_one():
    out = coherent_truncated(0.8, 40).normalize()
    assert metrics.fidelity_vs_amplified_coherent(out, 0.8) == pytest.approx(1, abs=1e-12)


def test_fidelity_of_vacuum():
    assert metrics.fidelity_vs_amplified_coherent(fock_state([0], 2), 0.5) == pytest.approx(
        math.exp(-0.25), abs=1e-14)


@pytest.mark.parametrize("a2, g2", [(0.1, 2.0), (0.2, 2.0), (0.3, 7.0)])
def test_pure_fidelity_formula(a2, g2):
    cfg = AmplifierConfig(Variant.TWO_PHOTON_PURE, math.sqrt(a2), g2)
    point = metrics.merit_curve(cfg, [g2])[0]
    assert abs(point.fidelity - oracles.pure_fidelity(a2, g2)) < 1e-12
    assert abs(point.probability - oracles.pure_probability(a2, g2)) < 1e-15
    assert point.utility == pytest.approx(oracles.utility(point.probability, point.fidelity), rel=1e-12)


def test_defect_example_values():
    d1 = 1 - math.exp(-0.2) * 1.22
    assert d1 == pytest.approx(1.148e-3, rel=1e-3)
    cfg = AmplifierConfig(Variant.TWO_PHOTON_PURE, math.sqrt(0.1), 2.0)
    point = metrics.merit_curve(cfg, [2.0])[0]
    assert abs(point.defect - d1) < 1e-12
    assert point.log_recip_defect == pytest.approx(-math.log10(d1), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_n_network_fidelity_formula(n):
    a2, g2 = 0.3, 2.5
    got = metrics.n_network_fidelity(math.sqrt(a2), g2, n)
    assert abs(got - oracles.n_network_fidelity(a2, g2, n)) < 1e-12


def test_sign_shift_scored_against_both_targets():
    a2, g2 = 0.1, 3.0
    x = a2 * g2
    out = two_photon_sign_shift(math.sqrt(a2), g2).output
    target = math.sqrt(x)
    flipped = metrics.fidelity_vs_amplified_coherent(out, target, sign_flipped=True)
    plain = metrics.fidelity_vs_amplified_coherent(out, target)
    assert abs(flipped - oracles.pure_fidelity(a2, g2)) < 1e-12
    assert abs(plain - math.exp(-x) * (1 + x - x * x / 2) ** 2 / (1 + x + x * x / 2)) < 1e-12
    assert plain < flipped


def test_utility_infinite_for_perfect_output():
    p = metrics.MeritPoint.from_values(2.0, 1.0, 0.1)
    assert math.isinf(p.utility) and math.isinf(p.log_recip_defect)


def test_reference_cutoff_grows_with_amplitude():
    assert metrics.reference_cutoff(0.1) == 12
    assert metrics.reference_cutoff(5.0) >= 25 + 40
    for ga in (0.5, 2.0, 5.0):
        cut = metrics.reference_cutoff(ga)
        tail = 1 - np.sum(np.abs(coherent_truncated(ga, cut).amplitudes) ** 2)
        assert tail < 1e-10


def test_fidelity_rejects_unnormalized_and_multimode():
    with pytest.raises(ValueError):
        metrics.fidelity_vs_amplified_coherent(superposition([0.5, 0.5]), 0.1)
    with pytest.raises(ValueError):
        metrics.fidelity_vs_amplified_coherent(fock_state([0, 0], 2), 0.1)


def test_reference_cutoff_error_on_short_reference():
    with pytest.raises(metrics.ReferenceCutoffError):
        metrics.fidelity_vs_amplified_coherent(fock_state([0], 2), 2.0, cutoff=3)


def test_merit_curve_rejects_bad_gain():
    cfg = AmplifierConfig(Variant.TWO_PHOTON_PURE, 0.3, 1.0)
    with pytest.raises(ValueError):
        metrics.merit_curve(cfg, [1.0, -2.0])


def test_merit_curve_simulated_matches_closed_form():
    cfg = AmplifierConfig(Variant.TWO_PHOTON_SIGN_SHIFT, math.sqrt(0.2), 1.0)
    grid = [1.0, 3.0, 9.0]
    closed = metrics.merit_curve(cfg, grid, sign_flipped_target=True)
    sim = metrics.merit_curve(cfg, grid, simulated=True, sign_flipped_target=True)
    for a, b in zip(closed, sim):
        assert abs(a.fidelity - b.fidelity) < 1e-12
        assert abs(a.probability - b.probability) < 1e-12
