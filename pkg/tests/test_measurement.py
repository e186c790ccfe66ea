import math

import numpy as np
import pytest

from maxent.linalg import partial_trace_single_site
from maxent.measurement import (
    AXES,
    ShotRecord,
    axes_from_chars,
    bloch_vector,
    born_probabilities,
    chars_from_axes,
    correlation,
    correlation_matrix,
    empirical_correlation,
    empirical_expectation,
    local_expectation,
    local_variance,
    mutual_information,
    outcome_symbols,
    pauli,
    sample_outcomes,
)
from maxent.states import epr_family, example_state, from_amplitudes, ghz

import oracles

LN2 = math.log(2.0)


def _random_state(rng, n):
    z = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return from_amplitudes(z)


def test_pauli_matrices():
    for axis in AXES:
        assert np.array_equal(pauli(axis), oracles.SIGMA[axis])
    m = pauli(1)
    m[0, 0] = 9.0  # must be a copy
    assert pauli(1)[0, 0] == 0.0
    with pytest.raises(ValueError):
        pauli(4)


def test_local_expectation_matches_dense_oracle():
    rng = np.random.default_rng(10)
    for n in (1, 2, 3):
        st = _random_state(rng, n)
        for site in range(1, n + 1):
            for axis in AXES:
                got = local_expectation(st, site, axis)
                want = oracles.expectation(st.amplitudes, n, site, axis)
                assert got == pytest.approx(want, abs=1e-13)
                assert -1.0 - 1e-12 <= got <= 1.0 + 1e-12


def test_local_expectation_agrees_with_density_route():
    # binding test for the density-matrix convention
    rng = np.random.default_rng(11)
    for n in (2, 3):
        st = _random_state(rng, n)
        for site in range(1, n + 1):
            rho = partial_trace_single_site(st.amplitudes, n, site)
            for axis in AXES:
                via_rho = float(np.trace(rho @ oracles.SIGMA[axis]).real)
                assert local_expectation(st, site, axis) == pytest.approx(
                    via_rho, abs=1e-12
                )


def test_local_variance_identity():
    rng = np.random.default_rng(12)
    for _ in range(20):
        st = _random_state(rng, 2)
        for site in (1, 2):
            for axis in AXES:
                e = local_expectation(st, site, axis)
                assert local_variance(st, site, axis) == pytest.approx(
                    1.0 - e * e, abs=1e-12
                )


def test_bloch_vector_stacks_expectations():
    st = from_amplitudes([1.0, 0, 0, 0])
    assert np.allclose(bloch_vector(st, 1), [0.0, 0.0, 1.0], atol=1e-15)


def test_correlation_matches_oracle():
    rng = np.random.default_rng(13)
    st = _random_state(rng, 3)
    for (sa, sb) in ((1, 2), (1, 3), (2, 3), (3, 1)):
        for aa in AXES:
            for ab in AXES:
                got = correlation(st, sa, aa, sb, ab)
                want = oracles.covariance(st.amplitudes, 3, sa, aa, sb, ab)
                assert got == pytest.approx(want, abs=1e-12)
    with pytest.raises(ValueError):
        correlation(st, 2, 1, 2, 3)


def test_correlation_matrix_examples():
    bell = epr_family("varphi", 0.0)
    t = correlation_matrix(bell, 1, 2).t
    want = np.array([oracles.covariance(bell.amplitudes, 2, 1, i, 2, j) for i in AXES for j in AXES]).reshape(3, 3)
    assert np.allclose(t, want, atol=1e-12)
    assert np.allclose(t, np.diag([1.0, -1.0, 1.0]), atol=1e-12)

    product = from_amplitudes([0.0, 1.0, 0.0, 0.0])  # |+->
    assert np.allclose(correlation_matrix(product, 1, 2).t, 0.0, atol=1e-12)

    bal = example_state("two_qubit_balanced")
    tb = correlation_matrix(bal, 1, 2).t
    assert np.allclose(tb @ tb.T, np.eye(3), atol=1e-12)

    with pytest.raises(ValueError):
        correlation_matrix(bell, 1, 1)


def test_born_probabilities_match_projector_oracle():
    rng = np.random.default_rng(14)
    cases = [
        (epr_family("varphi", 0.3), (3, 3)),
        (epr_family("psi", 1.1), (1, 2)),
        (ghz("+"), (3, 3, 3)),
        (ghz("-"), (1, 1, 1)),
        (_random_state(rng, 3), (2, 3, 1)),
    ]
    for st, bases in cases:
        got = born_probabilities(st, bases)
        want = oracles.born_probabilities_projectors(st.amplitudes, st.n_qubits, bases)
        assert np.allclose(got, want, atol=1e-12)
        assert got.sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        born_probabilities(ghz("+"), (3, 3))
    with pytest.raises(ValueError):
        born_probabilities(ghz("+"), (3, 3, 4))


def test_sample_outcomes_deterministic_and_consistent():
    bell = epr_family("varphi", 0.0)
    a = sample_outcomes(bell, (3, 3), 5000, seed=9)
    b = sample_outcomes(bell, (3, 3), 5000, seed=9)
    assert a.counts == b.counts
    assert sum(a.counts.values()) == 5000
    # zero-probability outcomes never occur for the zz Bell measurement
    assert set(a.counts) <= {(1, 1), (-1, -1)}
    c = sample_outcomes(bell, (3, 3), 5000, seed=10)
    assert c.counts != a.counts  # different stream


def test_sample_outcomes_deterministic_state():
    plus = from_amplitudes([1.0, 0, 0, 0])
    rec = sample_outcomes(plus, (3, 3), 1000, seed=0)
    assert rec.counts == {(1, 1): 1000}
    with pytest.raises(ValueError):
        sample_outcomes(plus, (3, 3), 0, seed=0)


def test_sample_outcomes_ghz_only_aligned():
    rec = sample_outcomes(ghz("+"), (3, 3, 3), 20000, seed=4)
    assert set(rec.counts) <= {(1, 1, 1), (-1, -1, -1)}


def test_sampling_frequencies_near_born():
    rng = np.random.default_rng(15)
    st = _random_state(rng, 2)
    shots = 100_000
    rec = sample_outcomes(st, (1, 3), shots, seed=77)
    probs = born_probabilities(st, (1, 3))
    for index in range(4):
        outcome = tuple(1 if (index >> k) & 1 == 0 else -1 for k in (1, 0))
        freq = rec.counts.get(outcome, 0) / shots
        assert abs(freq - probs[index]) < 5.0 / math.sqrt(shots)


def test_shot_record_table_format():
    rec = ShotRecord(bases=(3, 3), shots=10, counts={(-1, -1): 4, (1, 1): 6}, seed=3)
    assert rec.to_table() == "bases=zz seed=3 shots=10\n++ 6\n-- 4\n"
    assert outcome_symbols((1, -1, 1)) == "+-+"


def test_axes_char_round_trip():
    assert axes_from_chars("xyz") == (1, 2, 3)
    assert chars_from_axes((3, 1)) == "zx"
    with pytest.raises(ValueError):
        axes_from_chars("xq")


def test_empirical_statistics():
    rec = ShotRecord(
        bases=(3, 3), shots=8, counts={(1, 1): 3, (1, -1): 1, (-1, 1): 1, (-1, -1): 3}, seed=0
    )
    assert empirical_expectation(rec, 1) == pytest.approx(0.0)
    assert empirical_expectation(rec, 2) == pytest.approx(0.0)
    # mean of products is (3 + 3 - 1 - 1)/8 = 0.5; means are zero
    assert empirical_correlation(rec, 1, 2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        empirical_expectation(rec, 3)


def test_mutual_information_exact_tables():
    perfectly_correlated = ShotRecord(
        bases=(3, 3), shots=1000, counts={(1, 1): 500, (-1, -1): 500}, seed=0
    )
    assert mutual_information(perfectly_correlated, 1, 2) == pytest.approx(
        LN2, abs=1e-12
    )
    deterministic = ShotRecord(bases=(3, 3), shots=100, counts={(1, 1): 100}, seed=0)
    assert mutual_information(deterministic, 1, 2) == 0.0


def test_mutual_information_product_state_is_small():
    plus = from_amplitudes([1.0, 0, 0, 0])
    shots = 10_000
    rec = sample_outcomes(plus, (1, 1), shots, seed=21)  # xx bases: coin flips
    assert mutual_information(rec, 1, 2) <= 3.0 / shots
