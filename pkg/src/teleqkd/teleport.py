"""Probabilistic teleportation through a partially entangled channel.

The channel is (|00> + n|11>)/sqrt(1+n^2); Alice measures her two qubits in
the generalized Bell basis with parameter m and Bob applies the Pauli
correction for the announced outcome j in 1..4. Closed forms live next to
`oracle_teleport`, which runs the same circuit on explicit state vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from teleqkd import qstate

# outcomes with probability below this are treated as unreachable
SUPPORT_TOL = 1e-14


@dataclass(frozen=True)
class CorrectionOp:
    label: str
    matrix: np.ndarray


CORRECTIONS = (
    CorrectionOp("I", qstate.PAULI_I),
    CorrectionOp("Z", qstate.PAULI_Z),
    CorrectionOp("X", qstate.PAULI_X),
    CorrectionOp("ZX", qstate.PAULI_Z @ qstate.PAULI_X),
)


@dataclass(frozen=True)
class TeleportParams:
    alpha: complex
    beta: complex
    m: float
    n: float

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > qstate.TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm}, expected 1")
        for name in ("m", "n"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")

    @property
    def input_state(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


def _check_j(j: int) -> int:
    if j not in (1, 2, 3, 4):
        raise ValueError(f"Bell outcome j = {j} not in 1..4")
    return j


def outcome_probs(a2, b2, m, n) -> np.ndarray:
    """Outcome probabilities from |alpha|^2, |beta|^2; broadcasts over arrays.

    The last axis of the result indexes j = 1..4.
    """
    a2, b2, m, n = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a2, b2, m, n)))
    mn2 = (m * n) ** 2
    denom = (1 + m * m) * (1 + n * n)
    return np.stack(
        [
            (a2 + mn2 * b2) / denom,
            (m * m * a2 + n * n * b2) / denom,
            (m * m * b2 + n * n * a2) / denom,
            (b2 + mn2 * a2) / denom,
        ],
        axis=-1,
    )


def measurement_probs(tp: TeleportParams) -> np.ndarray:
    return outcome_probs(abs(tp.alpha) ** 2, abs(tp.beta) ** 2, tp.m, tp.n)


def _bob_amplitudes(j: int, tp: TeleportParams) -> np.ndarray:
    a, b, m, n = tp.alpha, tp.beta, tp.m, tp.n
    return {
        1: np.array([a, m * n * b]),
        2: np.array([m * a, n * b]),
        3: np.array([n * a, m * b]),
        4: np.array([m * n * a, b]),
    }[j].astype(complex)


def bob_state_after_correction(j: int, tp: TeleportParams) -> np.ndarray:
    """Bob's qubit once he has applied U_j."""
    _check_j(j)
    if measurement_probs(tp)[j - 1] <= SUPPORT_TOL:
        raise ValueError(f"outcome j={j} has zero probability for {tp}")
    v = _bob_amplitudes(j, tp)
    return v / np.linalg.norm(v)


def oracle_teleport(j: int, tp: TeleportParams) -> tuple[float, np.ndarray | None]:
    """Run the three-qubit circuit explicitly.

    Returns ``(prob, state)``; state is None when the outcome cannot occur.
    """
    _check_j(j)
    channel = qstate.make_basis(qstate.BasisKind.GENBELL, tp.n)[0]
    full = qstate.density(qstate.tensor(tp.input_state, channel))
    bell_m = qstate.make_basis(qstate.BasisKind.GENBELL, tp.m)[j - 1]
    prob, bob = qstate.project(full, bell_m, (4, 2), subsystem=0)
    if bob is None:
        return prob, None
    u = CORRECTIONS[j - 1].matrix
    corrected = u @ bob @ u.conj().T
    w, vecs = np.linalg.eigh(corrected)
    return prob, vecs[:, np.argmax(w)]


def success_probability(n: float) -> float:
    """Chance that outcomes 2 or 3 occur on an equal-weight input under matching."""
    if not 0.0 <= n <= 1.0:
        raise ValueError(f"n = {n} outside [0, 1]")
    return 2 * n * n / (1 + n * n) ** 2


def _check_nm(n: float, m: float) -> None:
    if not (0.0 <= n <= 1.0 and 0.0 <= m <= 1.0):
        raise ValueError(f"n = {n}, m = {m} must lie in [0, 1]")
    if n == 0 and m == 0:
        raise ValueError("n and m cannot both be zero")


def tilde_states(n: float, m: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Bob's corrected states for |+> and |-> inputs on outcomes 2 and 3.

    Order: (zero, plus, minus, one), i.e. |+> via j=2, |+> via j=3,
    |-> via j=2, |-> via j=3.
    """
    _check_nm(n, m)
    s = math.sqrt(n * n + m * m)
    return (
        np.array([m, n], dtype=complex) / s,
        np.array([n, m], dtype=complex) / s,
        np.array([m, -n], dtype=complex) / s,
        np.array([n, -m], dtype=complex) / s,
    )


def mismatch_error(n: float, m: float) -> float:
    """Probability that an x-basis reading of a post-selected state flips the bit."""
    _check_nm(n, m)
    return (m - n) ** 2 / (2 * (n * n + m * m))


def teleport_round(tp: TeleportParams, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Sample one outcome and return ``(j, Bob's corrected state)``."""
    probs = measurement_probs(tp)
    probs = np.where(probs > SUPPORT_TOL, probs, 0.0)
    cdf = np.cumsum(probs / probs.sum())
    j = int(np.searchsorted(cdf, rng.random(), side="right")) + 1
    j = min(j, 4)
    while probs[j - 1] == 0.0:
        j -= 1
    return j, bob_state_after_correction(j, tp)
