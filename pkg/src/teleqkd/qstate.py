"""Dense state algebra and information measures for few-qubit systems.

Kets are 1-D complex arrays and density operators 2-D complex arrays in the
computational basis, leftmost tensor factor most significant. Everything lives
in at most 16 dimensions (two qubits plus a 4-level probe), so no sparse
machinery is used. All logarithms are base 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

TOL = 1e-9
MAX_DIM = 16
ZERO_PROB = 1e-14

SQRT1_2 = 1.0 / np.sqrt(2.0)

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([SQRT1_2, SQRT1_2], dtype=complex)
KET_MINUS = np.array([SQRT1_2, -SQRT1_2], dtype=complex)

# rows are the bit-0 and bit-1 states of each measurement basis
Z_BASIS = np.stack([KET_0, KET_1])
X_BASIS = np.stack([KET_PLUS, KET_MINUS])

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class InvalidStateError(ValueError):
    """Raised when an array violates a state invariant."""


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------


def ket(*amps: complex) -> np.ndarray:
    """Normalized ket from raw amplitudes."""
    v = np.asarray(amps, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidStateError("zero vector cannot be normalized")
    return v / norm


def check_ket(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size not in (2, 4, 8, 16):
        raise InvalidStateError(f"ket must be 1-D with dim in {{2,4,8,16}}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidStateError("ket has non-finite amplitudes")
    if abs(np.vdot(v, v).real - 1.0) > TOL:
        raise InvalidStateError(f"ket norm^2 = {np.vdot(v, v).real!r}, expected 1")
    return v


def check_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density operator must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density operator has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > TOL:
        raise InvalidStateError("density operator is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TOL:
        raise InvalidStateError(f"trace = {np.trace(rho).real!r}, expected 1")
    if eig_hermitian(rho)[0] < -TOL:
        raise InvalidStateError("density operator has a negative eigenvalue")
    return rho


def density(v: np.ndarray) -> np.ndarray:
    """Projector |v><v|."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized kets; insensitive to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)


def _check_distribution(probs: np.ndarray) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if np.any(p < -TOL):
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > TOL:
        raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1")
    return np.clip(p, 0.0, None)


# ---------------------------------------------------------------------------
# classical measures
# ---------------------------------------------------------------------------


def _xlog2x(p: np.ndarray) -> np.ndarray:
    """Elementwise p*log2(p), zero where p == 0."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)


def binary_entropy(x: float) -> float:
    if x < -1e-12 or x > 1 + 1e-12:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def shannon_entropy(probs: Sequence[float]) -> float:
    p = _check_distribution(probs)
    return float(-_xlog2x(p).sum())


def _check_joint(joint: np.ndarray) -> np.ndarray:
    j = np.asarray(joint, dtype=float)
    if j.shape != (2, 2):
        raise ValueError(f"joint distribution must be 2x2, got {j.shape}")
    _check_distribution(j.ravel())
    return np.clip(j, 0.0, None)


def conditional_entropy(joint: np.ndarray) -> float:
    """H(B|A) for a joint indexed [alice, bob].

    Rows whose marginal vanishes contribute nothing.
    """
    j = _check_joint(joint)
    total = 0.0
    for row in j:
        pa = row.sum()
        if pa > 0:
            total += pa * float(-_xlog2x(row / pa).sum())
    return total


def mutual_information(joint: np.ndarray) -> float:
    j = _check_joint(joint)
    h_b = float(-_xlog2x(j.sum(axis=0)).sum())
    return max(h_b - conditional_entropy(j), 0.0)


# ---------------------------------------------------------------------------
# spectra and quantum entropies
# ---------------------------------------------------------------------------


def _eig2_hermitian(m: np.ndarray) -> np.ndarray:
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    c = m[..., 0, 1]
    half_tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + (c.real**2 + c.imag**2))
    return np.stack([half_tr - disc, half_tr + disc], axis=-1)


def eig_hermitian(m: np.ndarray, check: bool = True) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix or a stack of them.

    2x2 inputs use the closed form; larger ones go through LAPACK. Pass
    ``check=False`` for stacks that are Hermitian by construction.
    """
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"expected square matrix (stack), got shape {m.shape}")
    if check and np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0) > TOL:
        raise InvalidStateError("matrix is not Hermitian")
    if m.shape[-1] == 2:
        return _eig2_hermitian(m)
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    return np.linalg.eigvalsh(m)


def entropy_of_spectrum(eigs: np.ndarray) -> np.ndarray:
    """Shannon entropy along the last axis of eigenvalue arrays.

    Values in [-TOL, 0) are rounding noise and clamp to zero; anything more
    negative means the input was not a state.
    """
    eigs = np.asarray(eigs, dtype=float)
    if np.any(eigs < -TOL):
        raise InvalidStateError(f"negative eigenvalue {eigs.min()!r}")
    return -_xlog2x(np.clip(eigs, 0.0, None)).sum(axis=-1)


def von_neumann_entropy(rho: np.ndarray) -> float | np.ndarray:
    """S(rho) = -Tr rho log2 rho; accepts a single operator or a stack."""
    s = entropy_of_spectrum(eig_hermitian(rho))
    return float(s) if np.ndim(s) == 0 else s


def holevo(members: Sequence[tuple[float, np.ndarray]]) -> float:
    """chi = S(sum w rho) - sum w S(rho) over (weight, state) pairs."""
    weights = _check_distribution([w for w, _ in members])
    states = [np.asarray(s, dtype=complex) for _, s in members]
    if len({s.shape for s in states}) != 1:
        raise ValueError("ensemble states must share one dimension")
    avg = sum(w * s for w, s in zip(weights, states))
    chi = von_neumann_entropy(avg) - sum(
        w * von_neumann_entropy(s) for w, s in zip(weights, states) if w > 0
    )
    return float(chi)


# ---------------------------------------------------------------------------
# composite systems
# ---------------------------------------------------------------------------


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two kets or two density operators."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("tensor needs two kets or two density operators")
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(f"product dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}")
    return np.kron(a, b)


def _check_dims(rho: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"factor dims {dims} do not multiply to {rho.shape[0]}")
    return dims


def partial_trace(rho: np.ndarray, keep: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Reduce rho onto the factors listed in `keep` (in the given order)."""
    rho = np.asarray(rho, dtype=complex)
    dims = _check_dims(rho, dims)
    keep = list(keep)
    k = len(dims)
    if any(i < 0 or i >= k for i in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid keep indices {keep} for {k} factors")
    t = rho.reshape(dims + dims)
    row = list(range(k))
    col = [i + k if i in keep else i for i in range(k)]
    out = [i for i in keep] + [i + k for i in keep]
    reduced = np.einsum(t, row + col, out)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(d, d)


def project(
    rho: np.ndarray, projector: np.ndarray, dims: Sequence[int], subsystem: int = 0
) -> tuple[float, np.ndarray | None]:
    """Measure factor `subsystem` onto the normalized ket `projector`.

    Returns the outcome probability and the post-measurement state of the
    remaining factors. A vanishing branch gives ``(0.0, None)``.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = _check_dims(rho, dims)
    proj = np.asarray(projector, dtype=complex)
    if proj.shape != (dims[subsystem],):
        raise ValueError(f"projector dim {proj.shape} does not match factor {dims[subsystem]}")
    if abs(np.vdot(proj, proj).real - 1.0) > TOL:
        raise ValueError("projector must be normalized")
    k = len(dims)
    t = np.moveaxis(rho.reshape(dims + dims), (subsystem, subsystem + k), (0, k))
    rest = int(rho.shape[0] // dims[subsystem])
    t = t.reshape(dims[subsystem], rest, dims[subsystem], rest)
    cond = np.einsum("a,aibj,b->ij", proj.conj(), t, proj)
    prob = float(np.trace(cond).real)
    if prob <= ZERO_PROB:
        return 0.0, None
    return prob, cond / prob


# ---------------------------------------------------------------------------
# two-qubit bases
# ---------------------------------------------------------------------------


class BasisKind(enum.Enum):
    BELL = "bell"
    TILDE = "tilde"
    XBELL = "xbell"
    XI = "xi"
    GENBELL = "genbell"


@dataclass(frozen=True)
class OrthonormalBasis:
    kind: BasisKind
    param: float | None
    vectors: np.ndarray  # shape (4, 4), one basis ket per row

    def __getitem__(self, i: int) -> np.ndarray:
        return self.vectors[i]

    def __len__(self) -> int:
        return len(self.vectors)

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


def _bell() -> np.ndarray:
    s = SQRT1_2
    return np.array(
        [[s, 0, 0, s], [s, 0, 0, -s], [0, s, s, 0], [0, s, -s, 0]], dtype=complex
    )


def make_basis(kind: BasisKind | str, param: float | None = None) -> OrthonormalBasis:
    """The four two-qubit bases used by the purification models.

    ``XI`` needs ``param = p`` in (1/4, 1/2]; ``GENBELL`` needs ``param = m``
    in [0, 1]. The others ignore ``param``.
    """
    kind = BasisKind(kind)
    bell = _bell()
    if kind is BasisKind.BELL:
        vecs, param = bell, None
    elif kind in (BasisKind.TILDE, BasisKind.XBELL):
        # XBELL writes |++>+|--> and |+->+|-+> in the x basis; these coincide
        # with the first two Bell states, so both kinds share one basis.
        vecs = np.array([bell[0], bell[1], [0, 1, 0, 0], [0, 0, 1, 0]], dtype=complex)
        param = None
    elif kind is BasisKind.XI:
        if param is None or not 0.25 < param <= 0.5:
            raise ValueError(f"XI basis needs p in (1/4, 1/2], got {param!r}")
        a, b = np.sqrt(2 * param), np.sqrt(max(1 - 2 * param, 0.0))
        vecs = np.array([a * bell[0] + b * bell[1], a * bell[1] - b * bell[0], bell[2], bell[3]])
    else:
        if param is None or not 0.0 <= param <= 1.0:
            raise ValueError(f"GENBELL basis needs m in [0, 1], got {param!r}")
        m = float(param)
        s = 1.0 / np.sqrt(1 + m * m)
        vecs = s * np.array(
            [[1, 0, 0, m], [m, 0, 0, -1], [0, 1, m, 0], [0, m, -1, 0]], dtype=complex
        )
    return OrthonormalBasis(kind, None if param is None else float(param), np.asarray(vecs, dtype=complex))
