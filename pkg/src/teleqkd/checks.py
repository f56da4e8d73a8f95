"""Cross-verification suites behind ``teleqkd verify``.

Each suite yields `CheckResult`s comparing an implementation against an
independent route: closed-form teleportation against the explicit circuit,
closed-form key rates against the explicit purification state, and
simulated statistics against the weights that generated them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from teleqkd import keyrate, qstate, teleport
from teleqkd.keyrate import LambdaVector, Model, ObservedStats, PurificationSpec
from teleqkd.rng import stream
from teleqkd.simproto import (
    ProtocolConfig,
    PurificationAttack,
    estimate_errors,
    expected_raw_key_size,
    run_protocol,
)

SUITES = ("teleport", "keyrate", "simproto")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: observed {self.observed:.12g} expected {self.expected:.12g} tol {self.tolerance:.3g}"


def _close(name: str, observed: float, expected: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(abs(observed - expected) <= tol), float(observed), float(expected), tol)


def _random_params(rng: np.random.Generator) -> teleport.TeleportParams:
    amps = rng.normal(size=2) + 1j * rng.normal(size=2)
    amps /= np.linalg.norm(amps)
    return teleport.TeleportParams(complex(amps[0]), complex(amps[1]), float(rng.random()), float(rng.random()))


def teleport_suite(trials: int = 500, seed: int = 7) -> Iterator[CheckResult]:
    rng = stream(seed, 0)
    worst_p, worst_f = 0.0, 0.0
    for _ in range(trials):
        tp = _random_params(rng)
        j = int(rng.integers(1, 5))
        prob, state = teleport.oracle_teleport(j, tp)
        closed = teleport.measurement_probs(tp)[j - 1]
        worst_p = max(worst_p, abs(prob - closed))
        if closed > 1e-6:
            fid = qstate.fidelity(state, teleport.bob_state_after_correction(j, tp))
            worst_f = max(worst_f, 1 - fid)
    yield _close(f"teleport outcome probabilities ({trials} draws)", worst_p, 0.0, 1e-10)
    yield _close(f"teleport corrected states, 1 - fidelity ({trials} draws)", worst_f, 0.0, 1e-10)


def _grid_stats(model: Model, a: float, b: float) -> tuple[PurificationSpec, ObservedStats, keyrate.RateOptions]:
    """Map (a, b) in [0, 1]^2 onto feasible statistics for `model`."""
    opts = keyrate.RateOptions()
    if model is Model.BB84_STD:
        return PurificationSpec(model), ObservedStats(eps_x=0.5 * a, eps_z=0.5 * b), opts
    if model is Model.BB84_ALT:
        ex = 0.5 * a
        return PurificationSpec(model), ObservedStats(eps_x=ex, eps_z=min(2 * ex, 0.5) * b), opts
    if model is Model.GR10:
        return PurificationSpec(model), ObservedStats(eps_x=0.5 * a), keyrate.RateOptions(beta=b)
    p = 0.26 + 0.24 * a
    return PurificationSpec(model, p), ObservedStats(p=p, Delta_x=b), opts


def keyrate_grid(points: int = 20) -> Iterator[tuple[Model, PurificationSpec, ObservedStats, keyrate.RateOptions]]:
    axis = np.linspace(0.0, 1.0, points)
    for model in Model:
        for a in axis:
            for b in axis:
                yield (model, *_grid_stats(model, float(a), float(b)))


def keyrate_suite(points: int = 8, perturb_lambda: float = 0.0) -> Iterator[CheckResult]:
    """Closed forms against the explicit purification state.

    `perturb_lambda` shifts weight from the second to the first Schmidt
    coefficient before the explicit evaluation; any nonzero shift should be
    reported as a mismatch.
    """
    worst = {m: 0.0 for m in Model}
    for model, spec, stats, opts in keyrate_grid(points):
        closed = keyrate.analytic_rate(spec, stats, opts)
        numeric = keyrate.numeric_rate(spec, stats, opts)
        worst[model] = max(worst[model], abs(closed.r - numeric.r))
        if perturb_lambda:
            lam = closed.lambdas_at_optimum.as_array() + np.array([perturb_lambda, -perturb_lambda, 0, 0])
            if lam.min() < 0:
                continue
            mi, chi = keyrate.purification_quantities(spec, LambdaVector.of(lam))
            worst[model] = max(worst[model], abs(closed.r - keyrate.devetak_winter(mi, chi, opts)))
    for model in Model:
        yield _close(f"keyrate {model.value} closed form vs explicit state ({points}x{points})", worst[model], 0.0, 1e-6)


LOOP_WEIGHTS = (
    (PurificationSpec(Model.BB84_STD), (0.7921, 0.0979, 0.0979, 0.0121), "bb84"),
    (PurificationSpec(Model.BB84_ALT), (0.8, 0.1, 0.05, 0.05), "bb84"),
    (PurificationSpec(Model.GR10), (0.85, 0.05, 0.05, 0.05), "gr10"),
    (PurificationSpec(Model.GR10_MOD, 0.45), (0.05, 0.05, 0.8, 0.1), "gr10-modified"),
)


def _binomial(name: str, rate: float | None, expected: float, n: int, sigmas: float = 3.0) -> CheckResult:
    tol = sigmas * math.sqrt(expected * (1 - expected) / n) if n else 0.0
    if rate is None:
        return CheckResult(name, False, math.nan, expected, tol)
    # a deterministic expectation still allows round-off
    return _close(name, rate, expected, max(tol, 1e-12))


def simproto_suite(rounds: int = 100_000, seed: int = 7) -> Iterator[CheckResult]:
    for n1, n2 in ((1.0, 1.0), (1.0, 0.5), (0.7, 0.7)):
        t = run_protocol(ProtocolConfig("gr10-modified", rounds, n1, n2, seed=seed))
        agree = float(np.mean(t.alice_bit == t.bob_bit))
        expected = 2 * keyrate.p_from_entanglement(n1, n2)
        yield _binomial(f"modified GR10 agreement n=({n1}, {n2})", agree, expected, rounds)
    for n1, n2 in ((1.0, 1.0), (0.5, 1.0)):
        cfg = ProtocolConfig("gr10", rounds, n1, n2, seed=seed)
        t = run_protocol(cfg)
        yield _binomial(f"GR10 kept fraction n=({n1}, {n2})", t.kept / rounds, expected_raw_key_size(cfg) / rounds, rounds)
    for spec, weights, kind in LOOP_WEIGHTS:
        lam = LambdaVector.of(weights)
        t = run_protocol(ProtocolConfig(kind, rounds, 0.7, 0.7, attack=PurificationAttack(spec, lam), seed=seed))
        est = estimate_errors(t)
        implied = keyrate.analytic_errors(spec, lam)
        if spec.model is Model.GR10_MOD:
            yield _binomial(f"loop closure {spec.model.value} agreement", est.agreement, implied["agreement"], est.n_agree)
            continue
        if "eps_z" in implied:
            yield _binomial(f"loop closure {spec.model.value} eps_z", est.eps_z, implied["eps_z"], est.n_z)
        yield _binomial(f"loop closure {spec.model.value} eps_x", est.eps_x, implied["eps_x"], est.n_x)


def run_suites(
    names: tuple[str, ...] = SUITES,
    trials: int = 500,
    seed: int = 7,
    perturb_lambda: float = 0.0,
    grid: int = 8,
    rounds: int = 100_000,
) -> list[CheckResult]:
    out: list[CheckResult] = []
    for name in names:
        if name == "teleport":
            out.extend(teleport_suite(trials, seed))
        elif name == "keyrate":
            out.extend(keyrate_suite(grid, perturb_lambda))
        elif name == "simproto":
            out.extend(simproto_suite(rounds, seed))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
