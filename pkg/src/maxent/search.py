"""Constructing maximally entangled states: exact 2-qubit parametrization
and a numerical optimizer for any qubit count.

The cost function is the sum of squared local Pauli expectations; its zero
set is exactly the maximally entangled states. The optimizer runs gradient
descent restricted to the unit sphere with a backtracking line search, plus
seeded random tangent kicks to leave exact critical points such as product
states (which are flat maxima) and saddles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import MAX_QUBITS
from .states import State

_HALF = 0.5
_R_SLACK = 1e-12
_BRANCH_TOL = 1e-9
_MIN_STEP = 1e-14
_ESCAPE_DIRECTIONS = 32
_ESCAPE_SIZES = (0.25, 0.05, 0.01, 1e-3)

DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class ConstraintParams:
    """Coordinates on the 2-qubit maximally entangled manifold.

    r is the shared modulus of the diagonal amplitudes, in [0, 1/sqrt(2)];
    alpha, beta, delta are the phases of a11, a12, a21. The off-diagonal
    modulus s and the phase gamma of a22 are determined: s = sqrt(1/2 - r^2)
    and gamma = branch + beta + delta - alpha mod 2 pi, with branch = +-pi.
    """

    r: float
    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    branch: float = math.pi

    def __post_init__(self) -> None:
        if not 0.0 <= self.r <= math.sqrt(_HALF) + _R_SLACK:
            raise ValueError(f"r must be in [0, 1/sqrt(2)], got {self.r}")
        if abs(abs(self.branch) - math.pi) > _BRANCH_TOL:
            raise ValueError(f"branch must be +pi or -pi, got {self.branch}")

    @property
    def s(self) -> float:
        rem = _HALF - self.r * self.r
        # The float nearest 1/sqrt(2) squares to 1/2 +- one ulp; the sqrt
        # would blow that ulp up to ~1e-8, so treat the corner as exact.
        if rem < 4.0 * math.ulp(_HALF):
            return 0.0
        return math.sqrt(rem)

    @property
    def gamma(self) -> float:
        raw = self.branch + self.beta + self.delta - self.alpha
        return math.remainder(raw, 2.0 * math.pi)


def generate_constrained(params: ConstraintParams) -> State:
    """Exact maximally entangled 2-qubit state from constraint coordinates.

    Entries of modulus zero are emitted as exact zeros, so degenerate
    parameter choices (r = 0 or r = 1/sqrt(2)) produce canonical files.
    """
    r, s = params.r, params.s
    a11 = r * complex(math.cos(params.alpha), math.sin(params.alpha)) if r > 0.0 else 0.0j
    a22 = r * complex(math.cos(params.gamma), math.sin(params.gamma)) if r > 0.0 else 0.0j
    a12 = s * complex(math.cos(params.beta), math.sin(params.beta)) if s > 0.0 else 0.0j
    a21 = s * complex(math.cos(params.delta), math.sin(params.delta)) if s > 0.0 else 0.0j
    return State(n_qubits=2, amplitudes=np.array([a11, a12, a21, a22]))


def random_constraint_params(seed) -> ConstraintParams:
    """Draw constraint coordinates: r^2 uniform on [0, 1/2], phases uniform."""
    rng = np.random.default_rng(seed)
    r = math.sqrt(_HALF * rng.random())
    alpha, beta, delta = rng.uniform(0.0, 2.0 * math.pi, size=3)
    return ConstraintParams(r=r, alpha=alpha, beta=beta, delta=delta)


def haar_random_state(n: int, seed) -> State:
    """Uniformly random n-qubit state: complex Gaussian vector, normalized."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    rng = np.random.default_rng(seed)
    dim = 1 << n
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return State(n_qubits=n, amplitudes=z / np.linalg.norm(z))


def haar_random_su2(seed) -> np.ndarray:
    """Haar-random 2x2 special unitary via QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, upper = np.linalg.qr(z)
    phases = np.diagonal(upper).copy()
    phases /= np.abs(phases)
    q = q * phases
    return q / np.sqrt(np.linalg.det(q))


def _local_expectations_raw(psi: np.ndarray, n_qubits: int) -> np.ndarray:
    """All 3n local Pauli expectations of an unnormalized vector.

    Row i holds (e1, e2, e3) for site i+1, each divided by <psi|psi> so the
    result is scale invariant (smooth off the sphere, which the gradient
    check relies on).
    """
    nn = np.vdot(psi, psi).real
    out = np.empty((n_qubits, 3))
    for site in range(n_qubits):
        left = 1 << site
        right = 1 << (n_qubits - site - 1)
        a = psi.reshape(left, 2, right)
        a0, a1 = a[:, 0, :], a[:, 1, :]
        cross = np.vdot(a0, a1)
        out[site, 0] = 2.0 * cross.real
        out[site, 1] = 2.0 * cross.imag
        out[site, 2] = np.vdot(a0, a0).real - np.vdot(a1, a1).real
    out /= nn
    return out


def cost_raw(psi: np.ndarray, n_qubits: int) -> float:
    """Sum of squared local expectations, Rayleigh-normalized."""
    e = _local_expectations_raw(psi, n_qubits)
    return float(np.sum(e * e))


def cost(state: State) -> float:
    """Sum over all sites and axes of the squared local Pauli expectation.

    Zero exactly on the maximally entangled states; at most n overall.
    """
    return cost_raw(state.amplitudes, state.n_qubits)


def cost_gradient_raw(psi: np.ndarray, n_qubits: int) -> np.ndarray:
    """Gradient of cost_raw in real coordinates, packed as a complex vector.

    Entry j holds d cost/d Re(psi_j) + i d cost/d Im(psi_j). Because the
    cost is Rayleigh-normalized the gradient is automatically tangent to
    both the radial and the global-phase directions on the unit sphere.
    """
    nn = np.vdot(psi, psi).real
    e = _local_expectations_raw(psi, n_qubits)
    total = float(np.sum(e * e))
    acc = np.zeros_like(psi)
    for site in range(n_qubits):
        left = 1 << site
        right = 1 << (n_qubits - site - 1)
        a = psi.reshape(left, 2, right)
        a0, a1 = a[:, 0, :], a[:, 1, :]
        e1, e2, e3 = e[site]
        v = acc.reshape(left, 2, right)
        v[:, 0, :] += e3 * a0 + (e1 - 1j * e2) * a1
        v[:, 1, :] += (e1 + 1j * e2) * a0 - e3 * a1
    return 4.0 * (acc - total * psi) / nn


@dataclass(frozen=True)
class SearchOutcome:
    """Result of one optimizer run; converged means final_cost <= tol."""

    state: State
    final_cost: float
    iterations: int
    converged: bool
    seed: int


def optimize(
    initial: State,
    tol: float,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
    trace: list | None = None,
) -> SearchOutcome:
    """Descend the cost over the unit sphere from a given state.

    Backtracking line search halves the step from 0.5 and only accepts
    strict cost decreases, so accepted iterates are monotone. When no
    decrease is found (exact critical point, or gradient below rounding),
    seeded random tangent kicks are tried, again accepted only on strict
    decrease; if they all fail the run stops with the best iterate so far.
    Exhausting max_iter is not an error, it just reports converged=False.
    A list passed as trace collects the cost of every accepted iterate.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 0:
        raise ValueError(f"max_iter must be >= 0, got {max_iter}")
    n = initial.n_qubits
    psi = initial.amplitudes.copy()
    current = cost_raw(psi, n)
    best_psi, best_cost = psi.copy(), current
    rng = np.random.default_rng(seed)
    iterations = 0
    if trace is not None:
        trace.append(current)
    while current > tol and iterations < max_iter:
        grad = cost_gradient_raw(psi, n)
        # Backtracking by halving from 0.5, but keep halving while the
        # candidate still improves: stopping at the first strict decrease
        # can lock onto the edge-of-stability step that ping-pongs across
        # a valley with only O(cost^2) progress per iteration.
        accepted = None
        step = 0.5
        while step >= _MIN_STEP:
            cand = psi - step * grad
            cand /= np.linalg.norm(cand)
            c = cost_raw(cand, n)
            if accepted is None:
                if c < current:
                    accepted = (cand, c)
            elif c < accepted[1]:
                accepted = (cand, c)
            else:
                break
            step *= 0.5
        if accepted is not None:
            psi, current = accepted
            moved = True
        else:
            moved = False
        if not moved:
            moved = _escape(psi, current, n, rng)
            if moved:
                psi, current = moved
            else:
                break
        iterations += 1
        if trace is not None:
            trace.append(current)
        if current < best_cost:
            best_psi, best_cost = psi.copy(), current
    return SearchOutcome(
        state=State(n_qubits=n, amplitudes=best_psi),
        final_cost=best_cost,
        iterations=iterations,
        converged=best_cost <= tol,
        seed=seed,
    )


def _escape(psi: np.ndarray, current: float, n_qubits: int, rng):
    """Try random tangent kicks of decreasing size; keep one that lowers cost."""
    dim = psi.size
    for _ in range(_ESCAPE_DIRECTIONS):
        d = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        d -= np.vdot(psi, d) * psi
        norm = np.linalg.norm(d)
        if norm == 0.0:
            continue
        d /= norm
        for eps in _ESCAPE_SIZES:
            cand = psi + eps * d
            cand /= np.linalg.norm(cand)
            c = cost_raw(cand, n_qubits)
            if c < current:
                return cand, c
    return None


def multi_start(
    n: int,
    starts: int,
    tol: float,
    seed: int,
    max_iter: int = DEFAULT_MAX_ITER,
) -> list[SearchOutcome]:
    """Independent optimizer runs from random starts, best (lowest cost) first.

    Per-start seeds are derived words of a single seed sequence, so the
    result is identical however the starts are scheduled.
    """
    if starts < 1:
        raise ValueError(f"starts must be >= 1, got {starts}")
    words = np.random.SeedSequence(seed).generate_state(starts, dtype=np.uint64)
    outcomes = []
    for word in words:
        start_seed = int(word)
        initial = haar_random_state(n, start_seed)
        outcomes.append(optimize(initial, tol, max_iter=max_iter, seed=start_seed))
    outcomes.sort(key=lambda o: o.final_cost)
    return outcomes
