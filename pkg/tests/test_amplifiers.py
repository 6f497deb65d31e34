import math

import numpy as np
import pytest

import oracles
from qscissors import amplifiers as amp
from qscissors.amplifiers import AmplifierConfig, Variant
from qscissors.fock import project_branch


def _padded(state, cutoff):
    return state.with_cutoff(cutoff).amplitudes


def assert_same_ray(state, expected, atol=1e-12):
    """Compare a single-mode state with an oracle vector up to a global phase."""
    got = _padded(state, len(expected) - 1)
    k = int(np.argmax(np.abs(expected)))
    phase = got[k] / abs(got[k]) * abs(expected[k]) / expected[k]
    np.testing.assert_allclose(got, phase * expected, atol=atol)


def test_one_photon_example_probability():
    a = math.sqrt(0.1)
    out = amp.one_photon_amplifier(a, 2.0)
    expected = math.exp(-0.1) * 0.5 * (1 / 3) * 1.2
    assert abs(out.probability - expected) < 1e-15
    v = np.array([1, math.sqrt(2) * a]) / math.sqrt(1.2)
    np.testing.assert_allclose(out.output.amplitudes, v, atol=1e-15)


@pytest.mark.parametrize("a2, g2", [(0.02, 1.0), (0.3, 4.0), (0.5, 10.0)])
def test_one_photon_simulated_matches_closed(a2, g2):
    a = math.sqrt(a2)
    closed = amp.one_photon_amplifier(a, g2)
    sim = amp.one_photon_amplifier(a, g2, simulated=True)
    assert abs(sim.probability - oracles.one_photon_probability(a2, g2)) < 1e-12
    assert abs(closed.probability - sim.probability) < 1e-12
    assert np.max(np.abs(_padded(closed.output, 10) - _padded(sim.output, 10))) < 1e-12


def test_one_photon_gain_magnitude_from_bs2_only():
    bs1 = amp.balanced_splitter()
    for phase in (0.0, 0.4, -2.0):
        out = amp.one_photon_closed_form(0.2, bs1, amp.gain_splitter(3.0, phase))
        raw = out.raw_branch.amplitudes
        assert abs(abs(raw[1] / raw[0] / 0.2) - math.sqrt(3.0)) < 1e-12


def test_one_photon_amplifier_gain_is_real_positive():
    out = amp.one_photon_amplifier(0.2, 3.0)
    ratio = out.output.amplitudes[1] / out.output.amplitudes[0] / 0.2
    assert abs(ratio - math.sqrt(3.0)) < 1e-12


def test_two_photon_pure_example():
    a = math.sqrt(0.1)
    out = amp.two_photon_pure_closed_form(a, 2.0)
    assert abs(out.probability - 2 / 81 * 1.22 * math.exp(-0.1)) < 1e-15
    assert abs(out.probability - 0.0273) < 5e-5
    assert_same_ray(out.output, oracles.pure_output(a, 2.0), atol=1e-14)


@pytest.mark.parametrize("a2, g2", [(0.1, 2.0), (0.2, 6.0), (0.5, 1.0)])
def test_two_photon_pure_simulated(a2, g2):
    a = math.sqrt(a2)
    sim = amp.two_photon_pure_simulated(a, g2)
    assert abs(sim.probability - oracles.pure_probability(a2, g2)) < 1e-12
    assert_same_ray(sim.output, oracles.pure_output(a, g2, 10), atol=1e-12)


def test_sign_shift_closed_and_simulated():
    a2, g2 = 0.3, 4.0
    a = math.sqrt(a2)
    for root in ("upper", "lower"):
        for sim in (False, True):
            out = amp.two_photon_sign_shift(a, g2, simulated=sim, root=root)
            assert abs(out.probability - oracles.sign_shift_probability(a2, g2)) < 1e-12
            assert_same_ray(out.output, oracles.sign_shift_output(a, g2, 10), atol=1e-12)


def test_pre_truncation_makes_no_difference():
    a = math.sqrt(0.5)
    short = amp.two_photon_pure_simulated(a, 4.0, pre_truncate=True)
    full = amp.two_photon_pure_simulated(a, 4.0, pre_truncate=False)
    assert abs(short.probability - full.probability) < 1e-12
    assert np.max(np.abs(_padded(short.output, 10) - _padded(full.output, 10))) < 1e-12


def test_variant_ii_reproduces_pure_family():
    for a2, g2 in [(0.1, 2.0), (0.3, 6.0)]:
        a = math.sqrt(a2)
        for sim in (False, True):
            out = amp.two_photon_variant_ii(a, g2, simulated=sim)
            assert_same_ray(out.output, oracles.pure_output(a, g2, 10), atol=1e-12)
    closed = amp.two_photon_variant_ii(0.4, 3.0, simulated=False)
    sim = amp.two_photon_variant_ii(0.4, 3.0, simulated=True)
    assert abs(closed.probability - sim.probability) < 1e-12


def test_variant_ii_fit_finds_lossy_solution_only():
    bs, residual = amp.fit_variant_ii_splitter()
    assert bs is not None and residual < 1e-10
    assert bs.loss > 1 / 3 - 1e-9
    out = amp.two_photon_variant_ii(0.3, 2.0, bs2=bs)
    assert_same_ray(out.output, oracles.pure_output(0.3, 2.0, 10), atol=1e-9)
    none, lossless_residual = amp.fit_variant_ii_splitter(lossless=True)
    assert none is None and lossless_residual > 1e-3


def test_n_network_example():
    p, out = amp.n_network(math.sqrt(0.1), 2.0, 2)
    assert abs(p - math.exp(-0.1) / 36 * 1.21) < 1e-15
    assert abs(p - 0.0304) < 5e-5
    assert out.cutoff >= 2


def test_n_network_one_arm_is_one_photon_scissors():
    a = math.sqrt(0.2)
    p, out = amp.n_network(a, 3.0, 1)
    single = amp.one_photon_amplifier(a, 3.0)
    assert abs(p - single.probability) < 1e-15
    np.testing.assert_allclose(out.amplitudes, single.output.amplitudes, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_n_network_simulated_matches_closed_form(n):
    a2, g2 = 0.3, 2.5
    a = math.sqrt(a2)
    p_closed, closed = amp.n_network(a, g2, n)
    p_sim, sim = amp.n_network_simulated(a, g2, n)
    assert abs(p_closed - oracles.n_network_probability(a2, g2, n)) < 1e-15
    assert abs(p_sim - p_closed) < 1e-12
    assert np.max(np.abs(_padded(closed, 10) - _padded(sim, 10))) < 1e-12


def test_recombination_matrix_is_unitary():
    for n in range(1, 6):
        u = amp.recombination_matrix(n)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-14)


def test_amplify_dispatch_agrees_with_direct_calls():
    a = math.sqrt(0.2)
    for variant in Variant:
        cfg = AmplifierConfig(variant, a, 2.0, n_arms=3)
        p_closed, out_closed = amp.amplify(cfg)
        p_sim, out_sim = amp.amplify(cfg, simulated=True)
        assert abs(p_closed - p_sim) < 1e-12, variant
        assert np.max(np.abs(_padded(out_closed, 10) - _padded(out_sim, 10))) < 1e-12, variant


def test_config_validation():
    with pytest.raises(ValueError):
        AmplifierConfig("two_photon_pure", 0.1, 0.0)
    with pytest.raises(ValueError):
        AmplifierConfig("n_network", 0.1, 2.0, n_arms=0)
    with pytest.raises(ValueError):
        AmplifierConfig("bogus", 0.1, 2.0)
    assert AmplifierConfig("one_photon", 0.1, 4.0).gain == 2.0


@pytest.mark.parametrize("variant", [Variant.ONE_PHOTON, Variant.TWO_PHOTON_PURE,
                                     Variant.TWO_PHOTON_SIGN_SHIFT, Variant.TWO_PHOTON_VARIANT_II])
def test_herald_table_is_complete(variant):
    cfg = AmplifierConfig(variant, math.sqrt(0.3), 2.0, cutoff=6)
    table = amp.herald_table(cfg)
    state, _, success = amp.simulated_network(cfg)
    total = sum(o.probability for o in table)
    assert abs(total - state.norm_squared()) < 1e-12
    assert abs(total - 1) < 1e-4  # input truncated at 6 photons
    hits = [o for o in table if o.herald == success]
    assert len(hits) == 1
    expected = project_branch(state, success).norm_squared()
    assert abs(hits[0].probability - expected) < 1e-15


def test_wrong_herald_breaks_the_amplifier():
    a = math.sqrt(0.1)
    good = amp.two_photon_pure_simulated(a, 2.0)
    bad = amp.two_photon_pure_simulated(a, 2.0, herald={amp.LINK: 1, amp.SIGNAL: 1, amp.LOSS: 0})
    diff = np.max(np.abs(_padded(good.output, 10) - _padded(bad.output, 10)))
    assert diff > 1e-3


def test_simulated_network_rejects_n_network():
    with pytest.raises(ValueError):
        amp.simulated_network(AmplifierConfig("n_network", 0.1, 2.0, n_arms=2))
