"""Local Pauli observables, correlations, and a Born-rule shot sampler.

Axes are numbered 1, 2, 3 for the x, y, z Pauli operators in the |+>, |->
basis. Expectations are computed by acting on the state vector directly;
the density-matrix route lives in :mod:`maxent.entanglement` and the two
are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import apply_single_site
from .states import State

AXES = (1, 2, 3)

AXIS_TO_CHAR = {1: "x", 2: "y", 3: "z"}
CHAR_TO_AXIS = {c: a for a, c in AXIS_TO_CHAR.items()}

_SIGMA = {
    1: np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    2: np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    3: np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Columns are the +1 and -1 eigenvectors of the corresponding Pauli.
_EIGENBASIS = {
    1: np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=np.complex128),
    2: np.array([[_INV_SQRT2, _INV_SQRT2], [1.0j * _INV_SQRT2, -1.0j * _INV_SQRT2]], dtype=np.complex128),
    3: np.eye(2, dtype=np.complex128),
}


def _check_axis(axis: int) -> int:
    if axis not in AXES:
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")
    return axis


def _check_site(state: State, site: int) -> int:
    if not 1 <= site <= state.n_qubits:
        raise ValueError(f"site must be in [1, {state.n_qubits}], got {site}")
    return site


def pauli(axis: int) -> np.ndarray:
    """The 2x2 Pauli matrix for axis 1 (x), 2 (y) or 3 (z)."""
    return _SIGMA[_check_axis(axis)].copy()


def local_expectation(state: State, site: int, axis: int) -> float:
    """Mean of a single-site Pauli measurement, in [-1, 1]."""
    _check_site(state, site)
    op = _SIGMA[_check_axis(axis)]
    acted = apply_single_site(state.amplitudes, state.n_qubits, site, op)
    return float(np.vdot(state.amplitudes, acted).real)


def local_variance(state: State, site: int, axis: int) -> float:
    """Variance of a single-site Pauli measurement, 1 - expectation^2."""
    e = local_expectation(state, site, axis)
    return 1.0 - e * e


def bloch_vector(state: State, site: int) -> np.ndarray:
    """The three local Pauli expectations of one site as a real 3-vector."""
    return np.array([local_expectation(state, site, axis) for axis in AXES])


def correlation(state: State, site_a: int, axis_a: int, site_b: int, axis_b: int) -> float:
    """Covariance of two single-site Pauli measurements on distinct sites."""
    if site_a == site_b:
        raise ValueError("correlation requires two distinct sites")
    _check_site(state, site_a)
    _check_site(state, site_b)
    op_a = _SIGMA[_check_axis(axis_a)]
    op_b = _SIGMA[_check_axis(axis_b)]
    acted = apply_single_site(state.amplitudes, state.n_qubits, site_b, op_b)
    acted = apply_single_site(acted, state.n_qubits, site_a, op_a)
    joint = float(np.vdot(state.amplitudes, acted).real)
    return joint - local_expectation(state, site_a, axis_a) * local_expectation(
        state, site_b, axis_b
    )


@dataclass(frozen=True)
class CorrelationMatrix:
    """3x3 matrix of pairwise Pauli covariances for one site pair."""

    t: np.ndarray
    site_pair: tuple[int, int]

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=float, copy=True)
        if t.shape != (3, 3):
            raise ValueError(f"correlation matrix must be 3x3, got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


def correlation_matrix(state: State, site_a: int, site_b: int) -> CorrelationMatrix:
    """All nine Pauli covariances between two distinct sites."""
    if state.n_qubits < 2:
        raise ValueError("correlation matrix needs at least 2 qubits")
    if site_a == site_b:
        raise ValueError("correlation matrix requires two distinct sites")
    _check_site(state, site_a)
    _check_site(state, site_b)
    e_a = [local_expectation(state, site_a, axis) for axis in AXES]
    e_b = [local_expectation(state, site_b, axis) for axis in AXES]
    t = np.empty((3, 3))
    for i, axis_a in enumerate(AXES):
        op_a = _SIGMA[axis_a]
        for j, axis_b in enumerate(AXES):
            acted = apply_single_site(state.amplitudes, state.n_qubits, site_b, _SIGMA[axis_b])
            acted = apply_single_site(acted, state.n_qubits, site_a, op_a)
            joint = float(np.vdot(state.amplitudes, acted).real)
            t[i, j] = joint - e_a[i] * e_b[j]
    return CorrelationMatrix(t=t, site_pair=(site_a, site_b))


def born_probabilities(state: State, bases) -> np.ndarray:
    """Exact outcome distribution for per-site Pauli measurements.

    Entry k is the probability of the outcome tuple whose bits (most
    significant site first) encode +1 as 0 and -1 as 1. Computed by rotating
    each site into the eigenbasis of its chosen Pauli.
    """
    bases = _check_bases(state, bases)
    rotated = state.amplitudes
    for site, axis in enumerate(bases, start=1):
        rotated = apply_single_site(
            rotated, state.n_qubits, site, _EIGENBASIS[axis].conj().T
        )
    return np.abs(rotated) ** 2


def _check_bases(state: State, bases) -> tuple[int, ...]:
    bases = tuple(bases)
    if len(bases) != state.n_qubits:
        raise ValueError(
            f"got {len(bases)} measurement axes for {state.n_qubits} qubits"
        )
    for axis in bases:
        _check_axis(axis)
    return bases


def axes_from_chars(text: str) -> tuple[int, ...]:
    """Map a string like 'zxz' to measurement axes (3, 1, 3)."""
    try:
        return tuple(CHAR_TO_AXIS[c] for c in text.lower())
    except KeyError as exc:
        raise ValueError(f"basis characters must be x, y or z, got {text!r}") from exc


def chars_from_axes(bases) -> str:
    return "".join(AXIS_TO_CHAR[a] for a in bases)


def outcome_symbols(outcome) -> str:
    """Render an outcome tuple like (+1, -1) as '+-'."""
    return "".join("+" if v > 0 else "-" for v in outcome)


def _outcome_tuple(index: int, n_qubits: int) -> tuple[int, ...]:
    return tuple(
        1 if (index >> k) & 1 == 0 else -1 for k in range(n_qubits - 1, -1, -1)
    )


@dataclass(frozen=True)
class ShotRecord:
    """Joint local-measurement outcomes from a seeded sampling run.

    ``counts`` maps outcome tuples in {+1, -1}^n to how often they occurred;
    outcomes that never occurred are absent. The counts always sum to
    ``shots``. ``seed`` pins the PCG64 stream that produced the record, so
    identical inputs reproduce it exactly.
    """

    bases: tuple[int, ...]
    shots: int
    counts: dict = field(repr=False)
    seed: int = 0

    def to_table(self) -> str:
        """Text table: a header line, then 'outcome count' rows.

        Rows are sorted lexicographically by outcome symbols with + before -.
        """
        header = f"bases={chars_from_axes(self.bases)} seed={self.seed} shots={self.shots}"
        rows = sorted((outcome_symbols(o), c) for o, c in self.counts.items())
        return "\n".join([header] + [f"{sym} {count}" for sym, count in rows]) + "\n"


def sample_outcomes(state: State, bases, shots: int, seed: int) -> ShotRecord:
    """Draw i.i.d. outcome tuples from the exact Born distribution.

    The random stream is numpy's PCG64 seeded with ``seed``; it consumes one
    uniform draw per shot, so a given (state, bases, shots, seed) always
    yields the same record. Outcomes with exactly zero probability are never
    produced.
    """
    bases = _check_bases(state, bases)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = born_probabilities(state, bases)
    cum = np.cumsum(probs)
    rng = np.random.default_rng(seed)
    draws = rng.random(shots)
    idx = np.searchsorted(cum, draws, side="right")
    np.minimum(idx, probs.size - 1, out=idx)
    binned = np.bincount(idx, minlength=probs.size)
    counts = {
        _outcome_tuple(i, state.n_qubits): int(c)
        for i, c in enumerate(binned)
        if c > 0
    }
    return ShotRecord(bases=bases, shots=shots, counts=counts, seed=seed)


def _check_record_site(record: ShotRecord, site: int) -> int:
    n = len(record.bases)
    if not 1 <= site <= n:
        raise ValueError(f"site must be in [1, {n}], got {site}")
    return site


def empirical_expectation(record: ShotRecord, site: int) -> float:
    """Sample mean of the +-1 outcomes at one site."""
    _check_record_site(record, site)
    total = sum(outcome[site - 1] * c for outcome, c in record.counts.items())
    return total / record.shots


def empirical_correlation(record: ShotRecord, site_a: int, site_b: int) -> float:
    """Sample covariance of the outcomes at two sites."""
    _check_record_site(record, site_a)
    _check_record_site(record, site_b)
    mean_ab = (
        sum(o[site_a - 1] * o[site_b - 1] * c for o, c in record.counts.items())
        / record.shots
    )
    return mean_ab - empirical_expectation(record, site_a) * empirical_expectation(
        record, site_b
    )


def mutual_information(record: ShotRecord, site_a: int, site_b: int) -> float:
    """Plug-in Shannon mutual information of two sites' outcomes, in nats.

    Uses the empirical joint distribution of the record with the 0 ln 0 = 0
    convention.
    """
    _check_record_site(record, site_a)
    _check_record_site(record, site_b)
    joint: dict[tuple[int, int], int] = {}
    for outcome, c in record.counts.items():
        key = (outcome[site_a - 1], outcome[site_b - 1])
        joint[key] = joint.get(key, 0) + c
    total = record.shots
    p_a: dict[int, float] = {}
    p_b: dict[int, float] = {}
    for (xa, xb), c in joint.items():
        p_a[xa] = p_a.get(xa, 0.0) + c / total
        p_b[xb] = p_b.get(xb, 0.0) + c / total
    mi = 0.0
    for (xa, xb), c in joint.items():
        p = c / total
        if p > 0.0:
            mi += p * math.log(p / (p_a[xa] * p_b[xb]))
    return mi
