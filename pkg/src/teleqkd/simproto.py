"""Seeded Monte Carlo runs of BB84 and the teleportation-based GR10 family.

Every round draws a fixed block of uniforms from `teleqkd.rng`, so the
transcript depends only on (config, seed). Rounds are simulated in vectorized
chunks with plain elementwise float arithmetic; no reductions cross rounds,
which keeps results bit-identical for any chunk size or worker count.

Uniform slots per round:

    BB84:  0 bit, 1 Alice basis, 2 Bob basis, 3 attack choice,
           4 Eve outcome, 5 Bob outcome, 6 disclose, 7 purification pair
    GR10:  0 bit, 1 channel label, 2 Alice label, 3 attack choice,
           4 Eve outcome, 5 Bell outcome, 6 Bob outcome or purification
           pair, 7 disclose
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Union

import numpy as np

from teleqkd import keyrate, qstate, teleport
from teleqkd.keyrate import Model, PurificationSpec, LambdaVector
from teleqkd.rng import round_uniforms

# probabilities this close to 0 or 1 are treated as exact so ideal runs stay error free
SNAP = 1e-12
DEFAULT_CHUNK = 1 << 16

_SQRT1_2 = math.sqrt(0.5)
_Z = np.array([[1.0, 0.0], [0.0, 1.0]])
_X = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]])
_BASES = (_Z, _X)


class ProtocolKind(enum.Enum):
    BB84 = "bb84"
    BB84_KEEP_ALL = "bb84-keep-all"
    GR10 = "gr10"
    GR10_MODIFIED = "gr10-modified"

    @property
    def is_gr10(self) -> bool:
        return self in (ProtocolKind.GR10, ProtocolKind.GR10_MODIFIED)


# ---------------------------------------------------------------------------
# attacks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoAttack:
    pass


@dataclass(frozen=True)
class Depolarizing:
    """Pauli channel with weights (1 - 3e/2, e/2, e/2, e/2) on (I, X, Z, XZ)."""

    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps < 2 / 3:
            raise ValueError(f"depolarizing eps = {self.eps} must lie in [0, 2/3)")


@dataclass(frozen=True)
class InterceptResend:
    policy: str = "random"

    def __post_init__(self):
        if self.policy not in ("z", "x", "random"):
            raise ValueError(f"intercept-resend policy {self.policy!r} not in z, x, random")


@dataclass(frozen=True)
class PurificationAttack:
    """Replace transport by sampling bits from a purification's Alice-Bob state."""

    spec: PurificationSpec
    lambdas: LambdaVector

    def __post_init__(self):
        self.lambdas.check_constraints(self.spec)


AttackModel = Union[NoAttack, Depolarizing, InterceptResend, PurificationAttack]


def format_attack(attack: AttackModel) -> str:
    if isinstance(attack, NoAttack):
        return "none"
    if isinstance(attack, Depolarizing):
        return f"depolarizing:{attack.eps!r}"
    if isinstance(attack, InterceptResend):
        return f"intercept-resend:{attack.policy}"
    spec = attack.spec.model.value
    if attack.spec.p is not None:
        spec += f"@{attack.spec.p!r}"
    lams = ",".join(repr(float(x)) for x in attack.lambdas.as_array())
    return f"purification:{spec}:{lams}"


def parse_attack(text: str) -> AttackModel:
    """Inverse of `format_attack`, e.g. ``depolarizing:0.05`` or
    ``purification:gr10-mod@0.45:0.1,0.1,0.6,0.2``."""
    head, _, rest = text.strip().partition(":")
    try:
        if head == "none" and not rest:
            return NoAttack()
        if head == "depolarizing":
            return Depolarizing(float(rest))
        if head == "intercept-resend":
            return InterceptResend(rest or "random")
        if head == "purification":
            spec_text, _, lam_text = rest.partition(":")
            model, _, p = spec_text.partition("@")
            spec = PurificationSpec(Model(model), float(p) if p else None)
            values = [float(x) for x in lam_text.split(",")]
            if len(values) != 4:
                raise ValueError("need four weights")
            return PurificationAttack(spec, LambdaVector.of(values))
    except ValueError as exc:
        raise ValueError(f"bad attack {text!r}: {exc}") from None
    raise ValueError(f"unknown attack {text!r}")


def _snap(p: np.ndarray) -> np.ndarray:
    return np.where(p > 1 - SNAP, 1.0, np.where(p < SNAP, 0.0, p))


def _attack_batch(psi: np.ndarray, attack: AttackModel, u_choice: np.ndarray, u_outcome: np.ndarray) -> np.ndarray:
    """Apply a transport attack to the leading qubit of real states psi (N, 2, r)."""
    if isinstance(attack, NoAttack):
        return psi
    if isinstance(attack, Depolarizing):
        e = attack.eps
        # cumulative cut points for I, X, Z, XZ
        flip_x = (u_choice >= 1 - 1.5 * e) & (u_choice < 1 - e) | (u_choice >= 1 - 0.5 * e)
        flip_z = u_choice >= 1 - e
        out = psi.copy()
        out[:, 1] = np.where(flip_z[:, None], -psi[:, 1], psi[:, 1])
        out = np.where(flip_x[:, None, None], out[:, ::-1], out)
        return out
    if isinstance(attack, InterceptResend):
        if attack.policy == "random":
            eve_x = u_choice >= 0.5
        else:
            eve_x = np.full(len(psi), attack.policy == "x")
        basis = np.where(eve_x[:, None, None], _X, _Z)
        # amplitudes of the rest of the system for each of Eve's outcomes
        c0 = basis[:, 0, 0, None] * psi[:, 0] + basis[:, 0, 1, None] * psi[:, 1]
        c1 = basis[:, 1, 0, None] * psi[:, 0] + basis[:, 1, 1, None] * psi[:, 1]
        p0 = _snap((c0 * c0).sum(axis=1))
        k1 = u_outcome >= p0
        c = np.where(k1[:, None], c1, c0)
        norm = np.sqrt((c * c).sum(axis=1))
        c = c / np.where(norm > 0, norm, 1.0)[:, None]
        vec = np.where(k1[:, None], basis[:, 1], basis[:, 0])
        return vec[:, :, None] * c[:, None, :]
    raise ValueError("purification attacks do not act on transported states")


def apply_attack(state: np.ndarray, attack: AttackModel, rng: np.random.Generator) -> np.ndarray:
    """Attack one transported state; Eve acts on the leading qubit.

    `state` is a real qubit (2,) or a qubit followed by a partner system
    (2 * r,). Purification attacks are rejected here since they replace the
    transport step altogether; see `purification_joint`.
    """
    psi = np.asarray(state, dtype=float)
    if np.iscomplexobj(state) and np.any(np.imag(state)):
        raise ValueError("simulated transport states are real")
    shaped = psi.reshape(1, 2, -1)
    u = rng.random(2)
    return _attack_batch(shaped, attack, u[:1], u[1:]).reshape(psi.shape)


def purification_joint(attack: PurificationAttack, alice_basis: np.ndarray, bob_basis: np.ndarray) -> np.ndarray:
    """p(a, b) when Alice and Bob measure the purification's two-qubit state."""
    basis = attack.spec.basis()
    lam = attack.lambdas.as_array()
    rho = sum(lam[j] * qstate.density(basis[j]) for j in range(4))
    joint = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            v = qstate.tensor(alice_basis[a].astype(complex), bob_basis[b].astype(complex))
            joint[a, b] = np.vdot(v, rho @ v).real
    return np.clip(joint, 0.0, None)


def _sample_cells(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index of the sampled category for each row of probs (N, K).

    Categories past the last one with positive mass can never be drawn.
    """
    cdf = np.cumsum(probs / probs.sum(axis=1, keepdims=True), axis=1)
    k = probs.shape[1]
    last = k - 1 - np.argmax(probs[:, ::-1] > 0, axis=1)
    cdf = np.where(np.arange(k) >= last[:, None], np.inf, cdf)
    return (u[:, None] >= cdf[:, : k - 1]).sum(axis=1)


# ---------------------------------------------------------------------------
# configuration and transcripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProtocolConfig:
    kind: ProtocolKind
    rounds: int
    n1: float = 1.0
    n2: float = 1.0
    disclose_fraction: float = 0.5
    attack: AttackModel = field(default_factory=NoAttack)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProtocolKind(self.kind))
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ValueError(f"rounds = {self.rounds} must be a positive integer")
        if not 0.0 < self.disclose_fraction < 1.0:
            raise ValueError(f"disclose_fraction = {self.disclose_fraction} must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed = {self.seed} must be a 64-bit unsigned integer")
        if self.kind.is_gr10:
            for name in ("n1", "n2"):
                v = getattr(self, name)
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"{name} = {v} outside [0, 1]")
            if self.n1 == 0 and self.n2 == 0:
                raise ValueError("n1 and n2 cannot both be zero")
        if isinstance(self.attack, PurificationAttack):
            gr10_spec = self.attack.spec.model in (Model.GR10, Model.GR10_MOD)
            if gr10_spec != self.kind.is_gr10:
                raise ValueError(f"{self.attack.spec.model.value} purification does not fit {self.kind.value}")

    def echo(self) -> list[tuple[str, str]]:
        return [
            ("kind", self.kind.value),
            ("rounds", str(self.rounds)),
            ("n1", repr(float(self.n1))),
            ("n2", repr(float(self.n2))),
            ("disclose_fraction", repr(float(self.disclose_fraction))),
            ("attack", format_attack(self.attack)),
            ("seed", str(self.seed)),
        ]

    @classmethod
    def from_echo(cls, items: dict[str, str]) -> "ProtocolConfig":
        return cls(
            kind=ProtocolKind(items["kind"]),
            rounds=int(items["rounds"]),
            n1=float(items["n1"]),
            n2=float(items["n2"]),
            disclose_fraction=float(items["disclose_fraction"]),
            attack=parse_attack(items["attack"]),
            seed=int(items["seed"]),
        )


class RoundRecord(NamedTuple):
    round: int
    alice_bit: int
    alice_param: str
    bob_param: str
    j: int | None
    bob_bit: int
    sifted: bool
    disclosed: bool


_COLUMNS = ("alice_bit", "alice_param", "bob_param", "j", "bob_bit", "sifted", "disclosed")
HEADER = "round,alice_bit,alice_param,bob_param,j,bob_bit,sifted,disclosed"


@dataclass
class Transcript:
    """Per-round record stored column-wise.

    alice_param / bob_param hold 0 or 1: the basis (z, x) for BB84 and the
    entanglement label (n1, n2) for GR10. j is 0 for BB84 rounds.
    """

    config: ProtocolConfig
    alice_bit: np.ndarray
    alice_param: np.ndarray
    bob_param: np.ndarray
    j: np.ndarray
    bob_bit: np.ndarray
    sifted: np.ndarray
    disclosed: np.ndarray

    def __len__(self) -> int:
        return len(self.alice_bit)

    @property
    def labels(self) -> tuple[str, str]:
        return ("n1", "n2") if self.config.kind.is_gr10 else ("z", "x")

    @property
    def kept(self) -> int:
        return int(self.sifted.sum())

    @property
    def discarded(self) -> int:
        return len(self) - self.kept

    @property
    def disclosed_count(self) -> int:
        return int(self.disclosed.sum())

    def records(self) -> Iterator[RoundRecord]:
        labels = self.labels
        gr10 = self.config.kind.is_gr10
        for i in range(len(self)):
            yield RoundRecord(
                i,
                int(self.alice_bit[i]),
                labels[self.alice_param[i]],
                labels[self.bob_param[i]],
                int(self.j[i]) if gr10 else None,
                int(self.bob_bit[i]),
                bool(self.sifted[i]),
                bool(self.disclosed[i]),
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transcript):
            return NotImplemented
        return self.config == other.config and all(
            np.array_equal(getattr(self, c), getattr(other, c)) for c in _COLUMNS
        )


# ---------------------------------------------------------------------------
# protocol engines
# ---------------------------------------------------------------------------


def _bb84_chunk(cfg: ProtocolConfig, u: np.ndarray) -> dict[str, np.ndarray]:
    a_basis = (u[:, 1] >= 0.5).astype(np.uint8)
    b_basis = (u[:, 2] >= 0.5).astype(np.uint8)
    if isinstance(cfg.attack, PurificationAttack):
        joints = np.array(
            [[purification_joint(cfg.attack, _BASES[x], _BASES[y]).ravel() for y in (0, 1)] for x in (0, 1)]
        )
        cell = _sample_cells(joints[a_basis, b_basis], u[:, 7])
        a_bit, b_bit = cell // 2, cell % 2
    else:
        a_bit = (u[:, 0] >= 0.5).astype(np.int64)
        prepared = np.stack([_Z, _X])[a_basis, a_bit]
        psi = _attack_batch(prepared[:, :, None], cfg.attack, u[:, 3], u[:, 4])[:, :, 0]
        bob0 = np.stack([_Z, _X])[b_basis, 0]
        amp = bob0[:, 0] * psi[:, 0] + bob0[:, 1] * psi[:, 1]
        b_bit = (u[:, 5] >= _snap(amp * amp)).astype(np.int64)
    if cfg.kind is ProtocolKind.BB84_KEEP_ALL:
        sifted = np.ones(len(u), dtype=bool)
    else:
        sifted = a_basis == b_basis
    return {
        "alice_bit": a_bit.astype(np.uint8),
        "alice_param": a_basis,
        "bob_param": b_basis,
        "j": np.zeros(len(u), dtype=np.uint8),
        "bob_bit": b_bit.astype(np.uint8),
        "sifted": sifted,
        "disclosed": sifted & (u[:, 6] < cfg.disclose_fraction),
    }


def _gr10_chunk(cfg: ProtocolConfig, u: np.ndarray) -> dict[str, np.ndarray]:
    a_bit = (u[:, 0] >= 0.5).astype(np.uint8)
    n_label = (u[:, 1] >= 0.5).astype(np.uint8)
    m_label = (u[:, 2] >= 0.5).astype(np.uint8)
    values = np.array([cfg.n1, cfg.n2], dtype=float)
    n, m = values[n_label], values[m_label]

    # channel amplitudes chan[:, alice_half, bob]
    chan = np.zeros((len(u), 2, 2))
    norm_n = np.sqrt(1 + n * n)
    chan[:, 0, 0] = 1 / norm_n
    chan[:, 1, 1] = n / norm_n
    transport = NoAttack() if isinstance(cfg.attack, PurificationAttack) else cfg.attack
    chan = _attack_batch(chan, transport, u[:, 3], u[:, 4])

    # teleported qubit is |+> or |->
    phi = np.stack([np.full(len(u), _SQRT1_2), np.where(a_bit == 1, -_SQRT1_2, _SQRT1_2)], axis=1)
    t = phi[:, :, None, None] * chan[:, None, :, :]  # t[:, input, half, bob]

    # Bob's unnormalized amplitudes for each generalized Bell outcome with parameter m
    s = 1 / np.sqrt(1 + m * m)
    bob = np.empty((len(u), 4, 2))
    for b in (0, 1):
        bob[:, 0, b] = s * (t[:, 0, 0, b] + m * t[:, 1, 1, b])
        bob[:, 1, b] = s * (m * t[:, 0, 0, b] - t[:, 1, 1, b])
        bob[:, 2, b] = s * (t[:, 0, 1, b] + m * t[:, 1, 0, b])
        bob[:, 3, b] = s * (m * t[:, 0, 1, b] - t[:, 1, 0, b])
    probs = _snap(bob[:, :, 0] ** 2 + bob[:, :, 1] ** 2)
    j_idx = _sample_cells(probs, u[:, 5])
    c = bob[np.arange(len(u)), j_idx]

    # corrections I, Z, X, ZX
    c0, c1 = c[:, 0], c[:, 1]
    z_flip = (j_idx == 1) | (j_idx == 3)
    x_swap = (j_idx == 2) | (j_idx == 3)
    c0, c1 = np.where(x_swap, c1, c0), np.where(x_swap, c0, c1)
    c1 = np.where(z_flip, -c1, c1)
    p_plus = _snap((c0 + c1) ** 2 / (2 * (c0 * c0 + c1 * c1)))
    b_bit = (u[:, 6] >= p_plus).astype(np.uint8)

    if isinstance(cfg.attack, PurificationAttack):
        joint = purification_joint(cfg.attack, _X, _X).ravel()
        cell = _sample_cells(np.broadcast_to(joint, (len(u), 4)), u[:, 6])
        a_bit, b_bit = (cell // 2).astype(np.uint8), (cell % 2).astype(np.uint8)

    j = (j_idx + 1).astype(np.uint8)
    if cfg.kind is ProtocolKind.GR10_MODIFIED:
        sifted = np.ones(len(u), dtype=bool)
    else:
        sifted = (n_label == m_label) & ((j == 2) | (j == 3))
    return {
        "alice_bit": a_bit,
        "alice_param": m_label,
        "bob_param": n_label,
        "j": j,
        "bob_bit": b_bit,
        "sifted": sifted,
        "disclosed": sifted & (u[:, 7] < cfg.disclose_fraction),
    }


def _run_chunk(cfg: ProtocolConfig, start: int, stop: int) -> dict[str, np.ndarray]:
    u = round_uniforms(cfg.seed, start, stop)
    return (_gr10_chunk if cfg.kind.is_gr10 else _bb84_chunk)(cfg, u)


def run_protocol(cfg: ProtocolConfig, chunk_size: int = DEFAULT_CHUNK, workers: int = 1) -> Transcript:
    if chunk_size < 1 or workers < 1:
        raise ValueError("chunk_size and workers must be positive")
    bounds = [(s, min(s + chunk_size, cfg.rounds)) for s in range(0, cfg.rounds, chunk_size)]
    if workers == 1:
        parts = [_run_chunk(cfg, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: _run_chunk(cfg, *ab), bounds))
    cols = {c: np.concatenate([p[c] for p in parts]) for c in _COLUMNS}
    return Transcript(cfg, **cols)


def sift(t: Transcript) -> tuple[np.ndarray, np.ndarray]:
    """Raw keys: the bits of every round the protocol keeps."""
    return t.alice_bit[t.sifted].copy(), t.bob_bit[t.sifted].copy()


def expected_raw_key_size(cfg: ProtocolConfig) -> float:
    if cfg.kind is ProtocolKind.GR10_MODIFIED:
        return float(cfg.rounds)
    if cfg.kind is not ProtocolKind.GR10:
        raise ValueError(f"expected raw key size is defined for the GR10 family, not {cfg.kind.value}")
    ps = teleport.success_probability
    return (ps(cfg.n1) / 2 + ps(cfg.n2) / 2) * cfg.rounds / 2


# ---------------------------------------------------------------------------
# parameter estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorEstimate:
    """Error statistics from the disclosed rounds; None where no sample exists.

    delta_x and Delta_x are reported as measured and can dip below zero
    through sampling noise.
    """

    eps_z: float | None = None
    eps_x: float | None = None
    agreement: float | None = None
    delta_x: float | None = None
    Delta_x: float | None = None
    p0: float | None = None
    n_z: int = 0
    n_x: int = 0
    n_agree: int = 0


def _error_rate(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> tuple[float | None, int]:
    k = int(mask.sum())
    if k == 0:
        return None, 0
    return float(np.count_nonzero(a[mask] != b[mask])) / k, k


def ideal_p(cfg: ProtocolConfig) -> float:
    """Agreement parameter an untouched modified-GR10 run would show."""
    attack = cfg.attack
    if isinstance(attack, PurificationAttack) and attack.spec.model is Model.GR10_MOD:
        return attack.spec.p
    return keyrate.p_from_entanglement(cfg.n1, cfg.n2)


def estimate_errors(t: Transcript, p0: float | None = None) -> ErrorEstimate:
    kind = t.config.kind
    d = t.disclosed
    a, b = t.alice_bit, t.bob_bit
    err, n_agree = _error_rate(a, b, d)
    agreement = None if err is None else 1.0 - err
    if not kind.is_gr10:
        eps_z, n_z = _error_rate(a, b, d & (t.alice_param == 0) & (t.bob_param == 0))
        eps_x, n_x = _error_rate(a, b, d & (t.alice_param == 1) & (t.bob_param == 1))
        return ErrorEstimate(eps_z=eps_z, eps_x=eps_x, agreement=agreement, n_z=n_z, n_x=n_x, n_agree=n_agree)
    if kind is ProtocolKind.GR10:
        return ErrorEstimate(eps_x=err, agreement=agreement, n_x=n_agree, n_agree=n_agree)
    p0 = ideal_p(t.config) if p0 is None else p0
    if agreement is None:
        return ErrorEstimate(p0=p0)
    delta = (1 - agreement) - (1 - 2 * p0)
    return ErrorEstimate(agreement=agreement, delta_x=delta, Delta_x=delta / (2 * p0), p0=p0, n_agree=n_agree)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def format_transcript(t: Transcript) -> str:
    labels = np.array(t.labels)
    gr10 = t.config.kind.is_gr10
    lines = [f"# {k} = {v}" for k, v in t.config.echo()]
    lines += [f"# kept = {t.kept}", f"# discarded = {t.discarded}", f"# disclosed = {t.disclosed_count}"]
    lines.append(HEADER)
    j = t.j.astype(str) if gr10 else np.full(len(t), "")
    cols = [
        np.arange(len(t)).astype(str),
        t.alice_bit.astype(str),
        labels[t.alice_param],
        labels[t.bob_param],
        j,
        t.bob_bit.astype(str),
        t.sifted.astype(np.uint8).astype(str),
        t.disclosed.astype(np.uint8).astype(str),
    ]
    lines.extend(",".join(row) for row in zip(*cols))
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> Transcript:
    echo: dict[str, str] = {}
    rows: list[list[str]] = []
    seen_header = False
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: expected '# key = value'")
            echo[key.strip()] = value.strip()
        elif line == HEADER:
            seen_header = True
        elif line:
            if not seen_header:
                raise ValueError(f"line {lineno}: data before header")
            rows.append(line.split(","))
    cfg = ProtocolConfig.from_echo(echo)
    labels = {"n1": 0, "n2": 1} if cfg.kind.is_gr10 else {"z": 0, "x": 1}
    if len(rows) != cfg.rounds:
        raise ValueError(f"expected {cfg.rounds} rounds, found {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != 8 or int(r[0]) != i:
            raise ValueError(f"malformed round {i}: {','.join(r)}")
    col = list(zip(*rows))
    t = Transcript(
        cfg,
        alice_bit=np.array(col[1], dtype=np.uint8),
        alice_param=np.array([labels[x] for x in col[2]], dtype=np.uint8),
        bob_param=np.array([labels[x] for x in col[3]], dtype=np.uint8),
        j=np.array([int(x) if x else 0 for x in col[4]], dtype=np.uint8),
        bob_bit=np.array(col[5], dtype=np.uint8),
        sifted=np.array(col[6], dtype=np.uint8).astype(bool),
        disclosed=np.array(col[7], dtype=np.uint8).astype(bool),
    )
    for key, value in (("kept", t.kept), ("discarded", t.discarded), ("disclosed", t.disclosed_count)):
        if key in echo and int(echo[key]) != value:
            raise ValueError(f"summary count {key} = {echo[key]} but records give {value}")
    return t


SUMMARY_FIELDS = (
    "kind", "rounds", "seed", "attack", "kept", "discarded", "disclosed",
    "agreement", "eps_z", "eps_x", "delta_x", "Delta_x", "n_z", "n_x", "n_agree",
)  # fmt: skip


def summary_row(t: Transcript, est: ErrorEstimate) -> dict[str, object]:
    cfg = t.config
    row: dict[str, object] = {
        "kind": cfg.kind.value,
        "rounds": cfg.rounds,
        "seed": cfg.seed,
        "attack": format_attack(cfg.attack),
        "kept": t.kept,
        "discarded": t.discarded,
        "disclosed": t.disclosed_count,
    }
    for name in SUMMARY_FIELDS[len(row):]:
        row[name] = getattr(est, name)
    return row
