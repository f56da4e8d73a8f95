"""Asymptotic secret-key fractions for BB84 and the teleportation-based protocol.

Four purification models of the Alice-Bob-Eve state are supported. Each one
has a closed-form Devetak-Winter rate and an independent numerical route that
builds the 16-dimensional purification explicitly, computes mutual
information and the Holevo quantity from spectra, and minimizes over Eve's
remaining free weight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import qstate
from .numerics import bisect_root, grid_then_golden
from .qstate import X_BASIS, Z_BASIS, BasisKind, binary_entropy, make_basis

LAMBDA_TOL = 1e-9


class InfeasibleStatsError(ValueError):
    """Observed statistics are incompatible with the chosen purification."""


class Model(enum.Enum):
    BB84_STD = "bb84-std"
    BB84_ALT = "bb84-alt"
    GR10 = "gr10"
    GR10_MOD = "gr10-mod"


_BASIS_OF = {
    Model.BB84_STD: BasisKind.BELL,
    Model.BB84_ALT: BasisKind.TILDE,
    Model.GR10: BasisKind.XBELL,
    Model.GR10_MOD: BasisKind.XI,
}


@dataclass(frozen=True)
class PurificationSpec:
    model: Model
    p: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.model is Model.GR10_MOD:
            if self.p is None or not 0.25 < self.p <= 0.5:
                raise ValueError(f"gr10-mod purification needs p in (1/4, 1/2], got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.model.value} purification takes no p")

    def basis(self) -> qstate.OrthonormalBasis:
        return make_basis(_BASIS_OF[self.model], self.p)

    @property
    def key_basis(self) -> np.ndarray:
        """Rows are the bit-0/bit-1 states Alice and Bob read the key in."""
        return Z_BASIS if self.model in (Model.BB84_STD, Model.BB84_ALT) else X_BASIS


@dataclass(frozen=True)
class LambdaVector:
    l1: float
    l2: float
    l3: float
    l4: float

    def __post_init__(self):
        lam = self.as_array()
        if np.any(lam < -LAMBDA_TOL) or abs(lam.sum() - 1.0) > LAMBDA_TOL:
            raise ValueError(f"invalid Schmidt weights {tuple(lam)}")

    @classmethod
    def of(cls, values) -> "LambdaVector":
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3, self.l4])

    def check_constraints(self, spec: PurificationSpec) -> None:
        """Raise if the weights break the model's equal-weight constraint."""
        if spec.model in (Model.BB84_ALT, Model.GR10) and abs(self.l3 - self.l4) > LAMBDA_TOL:
            raise ValueError(f"{spec.model.value} requires l3 == l4, got {self.l3!r}, {self.l4!r}")
        if spec.model is Model.GR10_MOD and abs(self.l1 - self.l2) > LAMBDA_TOL:
            raise ValueError(f"gr10-mod requires l1 == l2, got {self.l1!r}, {self.l2!r}")


@dataclass(frozen=True)
class ObservedStats:
    eps_z: float | None = None
    eps_x: float | None = None
    Delta_x: float | None = None
    p: float | None = None

    def __post_init__(self):
        for name in ("eps_z", "eps_x", "Delta_x", "p"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v!r} outside [0, 1]")


@dataclass(frozen=True)
class RateOptions:
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"reconciliation efficiency beta = {self.beta!r} outside [0, 1]")


@dataclass(frozen=True)
class RateResult:
    r: float
    lambdas_at_optimum: LambdaVector
    mutual_info: float
    holevo: float
    beta: float = field(default=1.0, repr=False)

    @property
    def secure(self) -> bool:
        return self.r > 0


def _xlogx(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def _entropy(lams) -> float:
    return -sum(_xlogx(float(v)) for v in lams)


def _in_unit(name: str, value: float, hi: float = 1.0) -> float:
    if value is None or not 0.0 <= value <= hi:
        raise InfeasibleStatsError(f"{name} = {value!r} outside [0, {hi}]")
    return float(value)


def devetak_winter(mutual_info: float, holevo: float, opts: RateOptions = RateOptions()) -> float:
    """beta * I(A:B) - chi(A:E). Negative values mean no key can be distilled."""
    if mutual_info < 0 or holevo < 0:
        raise ValueError("mutual information and Holevo quantity must be non-negative")
    return opts.beta * mutual_info - holevo


def _result(lams, mutual_info: float, holevo: float, opts: RateOptions) -> RateResult:
    lv = LambdaVector.of(np.clip(lams, 0.0, None))
    return RateResult(
        r=opts.beta * mutual_info - holevo,
        lambdas_at_optimum=lv,
        mutual_info=mutual_info,
        holevo=holevo,
        beta=opts.beta,
    )


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def bb84_std_rate(eps_x: float, eps_z: float, opts: RateOptions = RateOptions()) -> RateResult:
    """Standard Bell-diagonal purification, Eve's weight split already optimal."""
    ex = _in_unit("eps_x", eps_x, 0.5)
    ez = _in_unit("eps_z", eps_z, 0.5)
    lams = ((1 - ex) * (1 - ez), ex * (1 - ez), ez * (1 - ex), ex * ez)
    h_z = binary_entropy(ez)
    return _result(lams, 1 - h_z, _entropy(lams) - h_z, opts)


def bb84_alt_rate(eps_x: float, eps_z: float, opts: RateOptions = RateOptions()) -> RateResult:
    """Purification with |01>, |10> as Schmidt partners; no free parameter left."""
    ex = _in_unit("eps_x", eps_x)
    ez = _in_unit("eps_z", eps_z)
    if ez > 2 * ex + LAMBDA_TOL:
        raise InfeasibleStatsError(
            f"eps_z = {ez} > 2*eps_x = {2 * ex}: lambda_2 = eps_x - eps_z/2 would be negative"
        )
    if ex + ez / 2 > 1 + LAMBDA_TOL:
        raise InfeasibleStatsError(
            f"eps_x + eps_z/2 = {ex + ez / 2} > 1: lambda_1 = 1 - eps_x - eps_z/2 would be negative"
        )
    lam = ez / 2
    lams = (max(1 - ex - lam, 0.0), max(ex - lam, 0.0), lam, lam)
    h_z = binary_entropy(ez)
    return _result(lams, 1 - h_z, _entropy(lams) - h_z, opts)


def gr10_rate(eps_x: float, opts: RateOptions = RateOptions()) -> RateResult:
    ex = _in_unit("eps_x", eps_x, 0.5)
    lam_min = ex * (1 - ex)
    lams = (1 - ex - lam_min, ex - lam_min, lam_min, lam_min)
    h_x = binary_entropy(ex)
    return _result(lams, 1 - h_x, _entropy(lams) - h_x, opts)


def gr10_mod_rate(p: float, Delta_x: float, opts: RateOptions = RateOptions()) -> RateResult:
    """Modified protocol keeping every round; p is the ideal agreement half-weight."""
    if not 0.25 < p <= 0.5:
        raise InfeasibleStatsError(f"p = {p!r} outside (1/4, 1/2]")
    dx = _in_unit("Delta_x", Delta_x)
    lp = 2 * p * (1 - dx)
    lm = 1 - lp
    lam_min = lp * lm
    lams = (lam_min, lam_min, lp - lam_min, lm - lam_min)
    h_p = binary_entropy(lp)
    return _result(lams, 1 - h_p, _entropy(lams) - h_p, opts)


def p_from_entanglement(n1: float, n2: float) -> float:
    """Ideal same-bit probability per sign in the modified protocol.

    Twice this value is the noiseless Alice-Bob agreement when Bob's channel
    parameter and Alice's measurement parameter are drawn uniformly and
    independently from {n1, n2}.
    """
    for name, v in (("n1", n1), ("n2", n2)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} = {v!r} outside [0, 1]")
    num = (n1 + n2) ** 2 * (1 + n1 * n2) ** 2
    den = 4 * (1 + n1**2) ** 2 * (1 + n2**2) ** 2
    return 0.25 + num / den


def analytic_rate(spec: PurificationSpec, stats: ObservedStats, opts: RateOptions = RateOptions()) -> RateResult:
    """Dispatch to the closed form matching `spec`."""
    if spec.model is Model.BB84_STD:
        return bb84_std_rate(_need(stats, "eps_x"), _need(stats, "eps_z"), opts)
    if spec.model is Model.BB84_ALT:
        return bb84_alt_rate(_need(stats, "eps_x"), _need(stats, "eps_z"), opts)
    if spec.model is Model.GR10:
        return gr10_rate(_need(stats, "eps_x"), opts)
    return gr10_mod_rate(_spec_p(spec, stats), _need(stats, "Delta_x"), opts)


def _need(stats: ObservedStats, name: str) -> float:
    v = getattr(stats, name)
    if v is None:
        raise InfeasibleStatsError(f"statistic {name} is required for this model")
    return v


def _spec_p(spec: PurificationSpec, stats: ObservedStats) -> float:
    if stats.p is not None and abs(stats.p - spec.p) > 1e-12:
        raise ValueError(f"stats.p = {stats.p} disagrees with purification p = {spec.p}")
    return spec.p


# ---------------------------------------------------------------------------
# explicit purification
# ---------------------------------------------------------------------------


def purification_state(spec: PurificationSpec, lambdas: LambdaVector) -> np.ndarray:
    """|Psi>_ABE = sum_j sqrt(l_j) |basis_j>_AB |e_j>_E as a 16-dim ket."""
    basis = spec.basis()
    eve = np.eye(4, dtype=complex)
    lam = np.clip(lambdas.as_array(), 0.0, None)
    return sum(np.sqrt(lam[j]) * qstate.tensor(basis[j], eve[j]) for j in range(4))


def joint_distribution(spec: PurificationSpec, lambdas: LambdaVector) -> np.ndarray:
    """p_AB(a, b) with both parties reading the key basis of `spec`."""
    rho = qstate.density(purification_state(spec, lambdas))
    rho_ab = qstate.partial_trace(rho, [0, 1], (2, 2, 4))
    k = spec.key_basis
    joint = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            v = qstate.tensor(k[a], k[b])
            joint[a, b] = np.vdot(v, rho_ab @ v).real
    return joint


def eve_conditionals(spec: PurificationSpec, lambdas: LambdaVector, key_basis: np.ndarray | None = None):
    """Alice's outcome probabilities and Eve's conditional states.

    Alice measures `key_basis` (defaults to the model's key basis). Returns
    ``(probs, states, rho_e)`` where states[a] is None for a null outcome.
    """
    key_basis = spec.key_basis if key_basis is None else key_basis
    rho = qstate.density(purification_state(spec, lambdas))
    rho_ae = qstate.partial_trace(rho, [0, 2], (2, 2, 4))
    rho_e = qstate.partial_trace(rho, [2], (2, 2, 4))
    probs, states = [], []
    for a in range(2):
        prob, cond = qstate.project(rho_ae, key_basis[a], (2, 4), subsystem=0)
        probs.append(prob)
        states.append(cond)
    return np.array(probs), states, rho_e


def purification_quantities(spec: PurificationSpec, lambdas: LambdaVector) -> tuple[float, float]:
    """(I(A:B), chi(A:E)) evaluated on the explicit 16-dim state."""
    mi = qstate.mutual_information(joint_distribution(spec, lambdas))
    probs, states, _ = eve_conditionals(spec, lambdas)
    members = [(w, s) for w, s in zip(probs, states) if s is not None]
    total = sum(w for w, _ in members)
    chi = qstate.holevo([(w / total, s) for w, s in members])
    return mi, max(chi, 0.0)


def analytic_errors(spec: PurificationSpec, lambdas: LambdaVector) -> dict[str, float]:
    """Error statistics a purification implies, from its Schmidt weights."""
    l1, l2, l3, l4 = lambdas.as_array()
    if spec.model is Model.BB84_STD:
        return {"eps_z": l3 + l4, "eps_x": l2 + l4}
    if spec.model is Model.BB84_ALT:
        return {"eps_z": l3 + l4, "eps_x": l2 + (l3 + l4) / 2}
    if spec.model is Model.GR10:
        return {"eps_x": l2 + (l3 + l4) / 2}
    p = spec.p
    disagree = l1 * (1 - 2 * p) + l2 * 2 * p + l4
    delta = disagree - (1 - 2 * p)
    return {"agreement": 1 - disagree, "delta_x": delta, "Delta_x": delta / (2 * p)}


# ---------------------------------------------------------------------------
# batched evaluation for the numerical minimization
# ---------------------------------------------------------------------------


class _BatchEvaluator:
    """Mutual information and Holevo quantity for many weight vectors at once.

    The weights enter as a (G, 4) array; the basis and key basis are fixed
    per instance, so every bilinear form of the state amplitudes is a linear
    map of the weights precomputed from the basis vectors. Eve's conditional
    states have rank <= 2 and their spectra come from the 2x2 Gram matrices
    of the unnormalized conditional probe vectors.
    """

    def __init__(self, spec: PurificationSpec):
        vecs = spec.basis().vectors
        k = spec.key_basis.conj()
        # amplitudes of basis_j in the key basis: c[j, a, b]
        c = np.einsum("ax,by,jxy->jab", k, k, vecs.reshape(4, 2, 2))
        # joint[a, b] = sum_j l_j |c[j, a, b]|^2
        self.joint_map = (abs(c) ** 2).reshape(4, 4)
        # Gram of probe vectors given Alice's a: sum_j l_j conj(c[j,a,b]) c[j,a,b']
        self.gram_map = np.einsum("jab,jac->jabc", c.conj(), c).reshape(4, 8)
        # rho_E[e, f] = sqrt(l_e l_f) <basis_f|basis_e>
        self.overlap = (vecs.conj() @ vecs.T).T
        if not np.any(self.gram_map.imag) and not np.any(self.overlap.imag):
            self.gram_map = self.gram_map.real
            self.overlap = self.overlap.real

    def __call__(self, lams: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lams = np.clip(np.atleast_2d(lams), 0.0, None)
        g = len(lams)
        joint = lams @ self.joint_map
        p_a = joint[:, 0:2].sum(axis=1), joint[:, 2:4].sum(axis=1)
        p_a = np.stack(p_a, axis=-1)
        p_b = joint[:, 0:2] + joint[:, 2:4]
        mi = (
            qstate.entropy_of_spectrum(p_b)
            + qstate.entropy_of_spectrum(p_a)
            - qstate.entropy_of_spectrum(joint)
        )
        gram = (lams @ self.gram_map).reshape(g, 2, 2, 2)
        cond_eigs = qstate.eig_hermitian(gram, check=False)  # unnormalized, (G, a, 2)
        with np.errstate(invalid="ignore", divide="ignore"):
            normed = np.where(p_a[..., None] > 0, cond_eigs / p_a[..., None], 0.0)
        s_cond = qstate.entropy_of_spectrum(np.clip(normed, 0.0, None))
        root = np.sqrt(lams)
        rho_e = root[:, :, None] * root[:, None, :] * self.overlap
        s_e = qstate.entropy_of_spectrum(qstate.eig_hermitian(rho_e, check=False))
        chi = s_e - (p_a * s_cond).sum(axis=1)
        return np.clip(mi, 0.0, None), chi


@dataclass(frozen=True)
class _Family:
    lo: float
    hi: float
    weights: callable  # array of t -> (G, 4) weights


def _family(spec: PurificationSpec, stats: ObservedStats) -> _Family:
    """Eve's free-parameter family consistent with the observed statistics."""
    if spec.model is Model.BB84_STD:
        ex = _in_unit("eps_x", _need(stats, "eps_x"), 0.5)
        ez = _in_unit("eps_z", _need(stats, "eps_z"), 0.5)
        if ez == 0:
            return _Family(0.0, 0.0, lambda v: np.array([[1 - ex, ex, 0.0, 0.0]] * len(v)))
        lo = max(0.0, 1 - ex / ez)
        hi = min(1.0, (1 - ex) / ez)

        def weights(v):
            v = np.asarray(v, dtype=float)
            return np.stack([1 - ex - v * ez, ex - (1 - v) * ez, v * ez, (1 - v) * ez], axis=-1)

        return _Family(lo, hi, weights)
    if spec.model is Model.BB84_ALT:
        lams = bb84_alt_rate(_need(stats, "eps_x"), _need(stats, "eps_z")).lambdas_at_optimum.as_array()
        return _Family(0.0, 0.0, lambda v: np.tile(lams, (len(np.atleast_1d(v)), 1)))
    if spec.model is Model.GR10:
        ex = _in_unit("eps_x", _need(stats, "eps_x"), 0.5)

        def weights(t):
            t = np.asarray(t, dtype=float)
            return np.stack([1 - ex - t, ex - t, t, t], axis=-1)

        return _Family(0.0, min(ex, 1 - ex), weights)
    p = _spec_p(spec, stats)
    dx = _in_unit("Delta_x", _need(stats, "Delta_x"))
    lp = 2 * p * (1 - dx)
    lm = 1 - lp

    def weights(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, t, lp - t, lm - t], axis=-1)

    return _Family(0.0, min(lp, lm), weights)


def numeric_rate(
    spec: PurificationSpec,
    stats: ObservedStats,
    opts: RateOptions = RateOptions(),
    grid: int = 10_000,
    tol: float = 1e-10,
) -> RateResult:
    """Devetak-Winter rate from the explicit purification, minimized numerically.

    Eve's free weight is scanned on a dense grid and refined by golden-section
    search; the reported quantities are then recomputed on the explicit
    16-dimensional state at the optimum.
    """
    fam = _family(spec, stats)
    evaluate = _BatchEvaluator(spec)

    def r_of(t: np.ndarray) -> np.ndarray:
        mi, chi = evaluate(fam.weights(np.atleast_1d(t)))
        return opts.beta * mi - chi

    t_opt, _ = grid_then_golden(r_of, fam.lo, fam.hi, points=grid, tol=tol)
    lams = LambdaVector.of(np.clip(fam.weights(np.array([t_opt]))[0], 0.0, None) / 1.0)
    mi, chi = purification_quantities(spec, lams)
    return _result(lams.as_array(), mi, chi, opts)


def bb84_alt_free_split(eps_x: float, eps_z: float, grid: int = 10_000) -> float:
    """Eve's optimal lambda_3 in the |01>/|10> purification without the equal-weight constraint.

    With lambda_1 = 1 - eps_x - eps_z/2 and lambda_2 = eps_x - eps_z/2 fixed
    by the data, lambda_3 = t and lambda_4 = eps_z - t remain free. Returns
    the t minimizing the numerically evaluated rate.
    """
    bb84_alt_rate(eps_x, eps_z)  # feasibility
    spec = PurificationSpec(Model.BB84_ALT)
    evaluate = _BatchEvaluator(spec)
    l1, l2 = 1 - eps_x - eps_z / 2, eps_x - eps_z / 2

    def r_of(t):
        t = np.atleast_1d(t)
        lams = np.stack([np.full_like(t, l1), np.full_like(t, l2), t, eps_z - t], axis=-1)
        mi, chi = evaluate(lams)
        return mi - chi

    t_opt, _ = grid_then_golden(r_of, 0.0, eps_z, points=grid)
    return t_opt


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Threshold:
    """Root of r along one scanned statistic; value is None without a sign change."""

    value: float | None
    parameter: str
    lo: float
    hi: float

    @property
    def found(self) -> bool:
        return self.value is not None


def threshold(
    model: Model | str,
    scan: str,
    *,
    eps_x: float | None = None,
    eps_z: float | None = None,
    p: float | None = None,
    Delta_x: float | None = None,
    opts: RateOptions = RateOptions(),
    tol: float = 1e-9,
) -> Threshold:
    """Locate where the closed-form rate crosses zero.

    Scans: ``eps`` (symmetric eps_x = eps_z, BB84 models), ``eps-x`` (BB84
    models with fixed eps_z, or gr10), ``eps-z`` (BB84 models with fixed
    eps_x), ``delta-x`` (gr10-mod at fixed p) and ``p`` (gr10-mod at fixed
    Delta_x).
    """
    model = Model(model)
    bb84 = {Model.BB84_STD: bb84_std_rate, Model.BB84_ALT: bb84_alt_rate}
    if model in bb84:
        rate = bb84[model]
        if scan == "eps":
            f, lo, hi = (lambda e: rate(e, e, opts).r), 0.0, 0.5
        elif scan == "eps-x":
            ez = _given("eps_z", eps_z)
            lo = ez / 2 if model is Model.BB84_ALT else 0.0
            f, hi = (lambda e: rate(e, ez, opts).r), 0.5
        elif scan == "eps-z":
            ex = _given("eps_x", eps_x)
            hi = min(2 * ex, 0.5) if model is Model.BB84_ALT else 0.5
            f, lo = (lambda e: rate(ex, e, opts).r), 0.0
        else:
            raise ValueError(f"scan {scan!r} not available for {model.value}")
    elif model is Model.GR10:
        if scan not in ("eps-x", "eps"):
            raise ValueError(f"scan {scan!r} not available for gr10")
        scan = "eps-x"
        f, lo, hi = (lambda e: gr10_rate(e, opts).r), 0.0, 0.5
    elif scan == "delta-x":
        pp = _given("p", p)
        # beyond this point the agreement drops below 1/2 and r turns back up
        f, lo, hi = (lambda d: gr10_mod_rate(pp, d, opts).r), 0.0, 1 - 1 / (4 * pp)
    elif scan == "p":
        dx = _given("Delta_x", Delta_x)
        f, lo, hi = (lambda q: gr10_mod_rate(q, dx, opts).r), 0.25 + 1e-12, 0.5
    else:
        raise ValueError(f"scan {scan!r} not available for gr10-mod")
    return Threshold(bisect_root(f, lo, hi, tol), scan, lo, hi)


def _given(name: str, value: float | None) -> float:
    if value is None:
        raise ValueError(f"{name} must be fixed for this scan")
    return float(value)
