import math

import numpy as np
import pytest

from qscissors.fock import (
    MultimodeState,
    coherent_truncated,
    fock_state,
    inner_product,
    project_branch,
    project_mode,
    superposition,
    tensor,
    vacuum,
)


def test_coherent_vacuum():
    state = coherent_truncated(0.0, 2)
    np.testing.assert_allclose(state.amplitudes, [1, 0, 0])


def test_coherent_first_order_amplitudes():
    alpha = math.sqrt(0.1)
    state = coherent_truncated(alpha, 1)
    expected = [math.exp(-0.05), math.exp(-0.05) * math.sqrt(0.1)]
    np.testing.assert_allclose(state.amplitudes, expected, rtol=1e-15)
    assert not state.normalized


def test_coherent_complete_at_large_cutoff():
    assert abs(coherent_truncated(1.0, 20).norm_squared() - 1) < 1e-8


def test_coherent_matches_poisson_formula():
    alpha = 0.7 * np.exp(0.3j)
    state = coherent_truncated(alpha, 8)
    for n in range(9):
        expected = np.exp(-abs(alpha) ** 2 / 2) * alpha**n / math.sqrt(math.factorial(n))
        assert abs(state.amplitude(n) - expected) < 1e-15


def test_coherent_norm_monotone_in_cutoff():
    norms = [coherent_truncated(0.9, c).norm_squared() for c in range(15)]
    assert all(b >= a for a, b in zip(norms, norms[1:]))
    assert abs(norms[-1] - 1) < 1e-8


def test_tensor_examples():
    assert tensor([fock_state([1], 2), fock_state([0], 2)]).amplitude(1, 0) == 1
    v = tensor([vacuum(1, 3)] * 3)
    assert v.mode_count == 3 and v.amplitude(0, 0, 0) == 1
    both = tensor([fock_state([1], 2), fock_state([1], 2)])
    assert both.amplitude(1, 1) == 1 and both.norm_squared() == 1


def test_tensor_cutoff_mismatch():
    with pytest.raises(ValueError, match="cutoff"):
        tensor([vacuum(1, 2), vacuum(1, 3)])


def test_inner_product_basics():
    psi = superposition([0.6, 0.8j])
    assert abs(inner_product(psi, psi) - 1) < 1e-15
    assert inner_product(fock_state([0], 1), fock_state([1], 1)) == 0


def test_inner_product_is_conjugate_linear_in_first():
    a = superposition([0.6, 0.8])
    b = superposition([0.8, 0.6j])
    scaled = MultimodeState(a.amplitudes * 1j)
    assert abs(inner_product(scaled, b) - (-1j) * inner_product(a, b)) < 1e-15


def test_coherent_overlap_against_closed_form():
    a = coherent_truncated(0.3, 30)
    b = coherent_truncated(0.5, 30)
    overlap = abs(inner_product(a, b)) ** 2
    brute = abs(sum(
        np.exp(-(0.09 + 0.25) / 2) * (0.3 * 0.5) ** n / math.factorial(n) for n in range(31)
    )) ** 2
    assert abs(overlap - brute) < 1e-15
    assert abs(overlap / math.exp(-0.04) - 1) < 1e-8


def test_inner_product_shape_mismatch():
    with pytest.raises(ValueError):
        inner_product(vacuum(1, 2), vacuum(2, 2))


def test_project_examples():
    p, cond = project_mode(fock_state([1, 0], 2), 1, 0)
    assert p == 1 and cond.amplitude(1) == 1 and cond.normalized

    amps = np.zeros((2, 2), complex)
    amps[0, 1] = amps[1, 0] = 1 / math.sqrt(2)
    p, cond = project_mode(MultimodeState(amps), 1, 1)
    assert abs(p - 0.5) < 1e-15
    assert abs(cond.amplitude(0) - 1) < 1e-15


def test_project_zero_probability_is_flagged_empty():
    p, cond = project_mode(fock_state([1, 0], 2), 1, 2)
    assert p == 0.0 and cond.is_empty and not cond.normalized


def test_project_branch_keeps_absolute_weight():
    state = tensor([coherent_truncated(0.4, 4), fock_state([1], 4)])
    branch = project_branch(state, {1: 1})
    assert abs(branch.norm_squared() - state.norm_squared()) < 1e-15
    assert project_branch(state, {1: 7}).is_empty


def test_project_probabilities_sum_to_one():
    state = tensor([coherent_truncated(0.8, 6), coherent_truncated(0.5j, 6)])
    total = sum(project_mode(state, 0, n)[0] for n in range(7))
    assert abs(total - 1) < 1e-10


def test_invalid_states_rejected():
    with pytest.raises(ValueError):
        MultimodeState(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        MultimodeState(np.array([np.nan, 0]))
    with pytest.raises(ValueError):
        MultimodeState(np.array([0.5, 0.5]), normalized=True)


def test_states_are_immutable():
    state = fock_state([1], 2)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1


def test_with_cutoff_records_leakage():
    state = coherent_truncated(1.0, 10).with_cutoff(2)
    expected = math.exp(-1) * sum(1 / math.factorial(n) for n in range(3, 11))
    assert abs(state.leakage - expected) < 1e-14
