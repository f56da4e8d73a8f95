"""teleqkd command line: analyze, threshold, curve, simulate, verify.

Exit codes: 0 success (insecure verdicts and missing thresholds included),
1 internal failure or failed verification, 2 invalid input.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from teleqkd import checks, keyrate, simproto
from teleqkd.keyrate import InfeasibleStatsError, Model, ObservedStats, PurificationSpec, RateOptions

OUTPUT_DIR_ENV = "TELEQKD_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class UsageError(Exception):
    """Invalid input; reported and mapped to exit code 2."""


def fmt(x) -> str:
    """CSV cell: 9 significant digits for reals, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".9g")
    return str(x)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")
    return out.getvalue()


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _float_list(text: str) -> list[float]:
    return [_probability(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# parser and config file
# ---------------------------------------------------------------------------


def _add_stats(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--eps-x", type=_probability)
    p.add_argument("--eps-z", type=_probability)
    p.add_argument("--p", type=_probability)
    p.add_argument("--delta-x", type=_probability)
    p.add_argument("--beta", type=_probability, default=1.0)


def build_parser(suppress: bool = False) -> argparse.ArgumentParser:
    """With `suppress`, defaults are dropped so only explicit flags survive parsing."""
    kw = {"argument_default": argparse.SUPPRESS} if suppress else {}
    parser = argparse.ArgumentParser(prog="teleqkd", description=__doc__.splitlines()[0], **kw)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, **kw)
        p.add_argument("--config", type=Path, help="key = value file; flags take precedence")
        return p

    p = command("analyze", "secret-key fraction for given statistics")
    _add_stats(p)
    p.add_argument("--numeric", action="store_true", help="minimize over the explicit purification state")

    p = command("threshold", "noise level where the key fraction reaches zero")
    _add_stats(p)
    p.add_argument("--symmetric", action="store_true", help="scan eps_x = eps_z (BB84 models)")
    p.add_argument("--in", dest="scan", choices=["eps", "eps-x", "eps-z", "delta-x", "p"])

    p = command("curve", "key fraction along one statistic, written as CSV")
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--from", dest="lo", type=_probability, default=0.0)
    p.add_argument("--to", dest="hi", type=_probability)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--p", dest="p_list", type=_float_list, help="comma-separated p values (gr10-mod)")
    p.add_argument("--beta", type=_probability, default=1.0)
    p.add_argument("--output", type=Path)

    p = command("simulate", "Monte Carlo protocol run with parameter estimation")
    p.add_argument("--protocol", choices=[k.value for k in simproto.ProtocolKind])
    p.add_argument("--rounds", type=int, default=100_000)
    p.add_argument("--n1", type=_probability, default=1.0)
    p.add_argument("--n2", type=_probability, default=1.0)
    p.add_argument("--disclose-fraction", type=_probability, default=0.5)
    p.add_argument("--attack", default="none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=[m.value for m in Model], help="key-rate model fed by the estimates")
    p.add_argument("--beta", type=_probability, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--transcript", type=Path)
    p.add_argument("--summary", type=Path)

    p = command("verify", "cross-check closed forms, oracles and simulations")
    p.add_argument("--suite", choices=["all", *checks.SUITES], default="all")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--perturb-lambda", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--rounds", type=int, default=100_000)
    if suppress:
        # argument_default does not override explicit defaults
        for sp in sub.choices.values():
            for action in sp._actions:
                action.default = argparse.SUPPRESS
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def read_config(path: Path) -> dict[str, str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    items: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        items[key.strip()] = value.strip()
    return items


def _apply_config(sub: argparse.ArgumentParser, ns: argparse.Namespace, explicit: set[str], path: Path) -> None:
    by_option = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                by_option[opt[2:]] = action
    for key, value in read_config(path).items():
        action = by_option.get(key.replace("_", "-"))
        if action is None or action.dest in ("help", "config"):
            raise UsageError(f"{path}: unknown key {key!r}")
        if action.dest in explicit:
            continue
        if isinstance(action, argparse._StoreTrueAction):
            low = value.lower()
            if low not in _TRUE | _FALSE:
                raise UsageError(f"{path}: {key} expects true or false, got {value!r}")
            converted = low in _TRUE
        else:
            try:
                converted = action.type(value) if action.type else value
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"{path}: bad value for {key}: {exc}") from None
            if action.choices is not None and converted not in action.choices:
                raise UsageError(f"{path}: {key} must be one of {', '.join(map(str, action.choices))}")
        setattr(ns, action.dest, converted)


def parse(argv: Sequence[str]) -> argparse.Namespace:
    ns = build_parser().parse_args(argv)
    if getattr(ns, "config", None) is not None:
        explicit = set(vars(build_parser(suppress=True).parse_args(argv)))
        _apply_config(_subparser(build_parser(), ns.command), ns, explicit, ns.config)
    return ns


# ---------------------------------------------------------------------------
# shared validation
# ---------------------------------------------------------------------------


def _require(ns: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(ns, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _opts(ns: argparse.Namespace) -> RateOptions:
    try:
        return RateOptions(beta=ns.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec_and_stats(ns: argparse.Namespace) -> tuple[PurificationSpec, ObservedStats]:
    _require(ns, "model")
    model = Model(ns.model)
    need = {
        Model.BB84_STD: ("eps_x", "eps_z"),
        Model.BB84_ALT: ("eps_x", "eps_z"),
        Model.GR10: ("eps_x",),
        Model.GR10_MOD: ("p", "delta_x"),
    }[model]
    _require(ns, *need)
    try:
        spec = PurificationSpec(model, ns.p if model is Model.GR10_MOD else None)
        stats = ObservedStats(eps_z=ns.eps_z, eps_x=ns.eps_x, p=ns.p, Delta_x=ns.delta_x)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return spec, stats


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _report(model: str, result: keyrate.RateResult) -> str:
    lams = ", ".join(fmt(x) for x in result.lambdas_at_optimum.as_array())
    verdict = "secure" if result.secure else "insecure (r <= 0)"
    return "\n".join(
        [
            f"model: {model}",
            f"r = {fmt(result.r)}",
            f"lambdas = {lams}",
            f"I(A:B) = {fmt(result.mutual_info)}",
            f"chi(A:E) = {fmt(result.holevo)}",
            f"beta = {fmt(result.beta)}",
            f"verdict: {verdict}",
        ]
    )


def cmd_analyze(ns: argparse.Namespace) -> int:
    spec, stats = _spec_and_stats(ns)
    opts = _opts(ns)
    rate = keyrate.numeric_rate if ns.numeric else keyrate.analytic_rate
    try:
        result = rate(spec, stats, opts)
    except (InfeasibleStatsError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    print(_report(spec.model.value, result))
    return EXIT_OK


_SCAN_NAMES = {"eps": "eps", "eps-x": "eps_x", "eps-z": "eps_z", "delta-x": "Delta_x", "p": "p"}


def cmd_threshold(ns: argparse.Namespace) -> int:
    _require(ns, "model")
    model = Model(ns.model)
    scan = ns.scan
    if ns.symmetric:
        if scan not in (None, "eps"):
            raise UsageError("--symmetric conflicts with --in " + scan)
        scan = "eps"
    if scan is None:
        scan = {
            Model.BB84_STD: "eps",
            Model.BB84_ALT: "eps",
            Model.GR10: "eps-x",
            Model.GR10_MOD: "delta-x" if ns.p is not None else "p",
        }[model]
    if model is Model.GR10_MOD and scan == "p" and ns.delta_x is None:
        ns.delta_x = 0.0
    opts = _opts(ns)
    try:
        found = keyrate.threshold(
            model, scan, eps_x=ns.eps_x, eps_z=ns.eps_z, p=ns.p, Delta_x=ns.delta_x, opts=opts
        )
    except (InfeasibleStatsError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    name = _SCAN_NAMES[scan]
    if found.found:
        print(f"threshold {name} = {found.value:.6f}")
    else:
        print(f"no threshold: r keeps one sign for {name} in [{found.lo:.6f}, {found.hi:.6f}]")
    return EXIT_OK


def _curve_rows(ns: argparse.Namespace) -> tuple[list[str], list[list[object]]]:
    _require(ns, "model")
    model = Model(ns.model)
    opts = _opts(ns)
    if ns.steps < 2:
        raise UsageError(f"--steps must be at least 2, got {ns.steps}")
    lo, hi = ns.lo, 0.25 if ns.hi is None else ns.hi
    if not lo < hi:
        raise UsageError(f"curve range needs from < to, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, ns.steps)
    if model is Model.GR10_MOD:
        ps = ns.p_list or [0.46, 0.47, 0.48, 0.49, 0.50]
        if not 0 <= lo and hi <= 1:
            raise UsageError("Delta_x sweep must stay within [0, 1]")
        for p in ps:
            if not 0.25 < p <= 0.5:
                raise UsageError(f"p = {p} outside (1/4, 1/2]")
        rows = [[x, keyrate.gr10_mod_rate(p, x, opts).r, p, opts.beta] for p in ps for x in xs]
        return ["x", "r", "p", "beta"], rows
    if ns.p_list:
        raise UsageError("--p applies to gr10-mod curves only")
    if not 0 <= lo and hi <= 0.5:
        raise UsageError(f"error-rate sweep must stay within [0, 0.5], got [{lo}, {hi}]")
    if model is Model.GR10:
        f: Callable[[float], float] = lambda x: keyrate.gr10_rate(x, opts).r
    elif model is Model.BB84_STD:
        f = lambda x: keyrate.bb84_std_rate(x, x, opts).r
    else:
        f = lambda x: keyrate.bb84_alt_rate(x, x, opts).r
    return ["x", "r"], [[x, f(x)] for x in xs]


def cmd_curve(ns: argparse.Namespace) -> int:
    header, rows = _curve_rows(ns)
    path = ns.output or _output_dir() / f"curve_{ns.model}.csv"
    _write_atomic(path, _csv(header, rows))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


_DEFAULT_MODEL = {
    simproto.ProtocolKind.BB84: Model.BB84_STD,
    simproto.ProtocolKind.BB84_KEEP_ALL: Model.BB84_STD,
    simproto.ProtocolKind.GR10: Model.GR10,
    simproto.ProtocolKind.GR10_MODIFIED: Model.GR10_MOD,
}


def _rate_from_estimate(
    model: Model, est: simproto.ErrorEstimate, opts: RateOptions
) -> tuple[keyrate.RateResult | None, str]:
    """Key fraction for simulated statistics, or None with the reason it is unavailable."""
    try:
        if model is Model.GR10_MOD:
            if est.Delta_x is None:
                return None, "no disclosed rounds"
            # finite samples can show slightly better agreement than ideal
            dx = min(max(est.Delta_x, 0.0), 1.0)
            spec = PurificationSpec(model, est.p0)
            stats = ObservedStats(p=est.p0, Delta_x=dx)
        else:
            if est.eps_x is None or (model is not Model.GR10 and est.eps_z is None):
                return None, "no disclosed rounds"
            spec = PurificationSpec(model)
            stats = ObservedStats(eps_x=est.eps_x, eps_z=est.eps_z)
        return keyrate.analytic_rate(spec, stats, opts), ""
    except (InfeasibleStatsError, ValueError) as exc:
        return None, f"statistics outside the {model.value} model: {exc}"


def cmd_simulate(ns: argparse.Namespace) -> int:
    _require(ns, "protocol")
    try:
        cfg = simproto.ProtocolConfig(
            kind=simproto.ProtocolKind(ns.protocol),
            rounds=ns.rounds,
            n1=ns.n1,
            n2=ns.n2,
            disclose_fraction=ns.disclose_fraction,
            attack=simproto.parse_attack(ns.attack),
            seed=ns.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ns.workers < 1:
        raise UsageError("--workers must be positive")
    model = Model(ns.model) if ns.model else _DEFAULT_MODEL[cfg.kind]
    if (model in (Model.GR10, Model.GR10_MOD)) != cfg.kind.is_gr10:
        raise UsageError(f"model {model.value} does not fit protocol {cfg.kind.value}")
    opts = _opts(ns)
    out_dir = _output_dir()
    stem = f"{cfg.kind.value}_seed{cfg.seed}"
    transcript_path = ns.transcript or out_dir / f"{stem}_transcript.txt"
    summary_path = ns.summary or out_dir / f"{stem}_summary.csv"

    t = simproto.run_protocol(cfg, workers=ns.workers)
    est = simproto.estimate_errors(t)
    result, reason = _rate_from_estimate(model, est, opts)
    row = simproto.summary_row(t, est)
    row.update(
        model=model.value,
        beta=opts.beta,
        r=None if result is None else result.r,
        secure=False if result is None else result.secure,
    )
    _write_atomic(transcript_path, simproto.format_transcript(t))
    _write_atomic(summary_path, _csv(list(row), [list(row.values())]))

    print(f"protocol: {cfg.kind.value}  rounds: {cfg.rounds}  kept: {t.kept}  disclosed: {t.disclosed_count}")
    for name in ("eps_z", "eps_x", "agreement", "Delta_x"):
        value = getattr(est, name)
        if value is not None:
            print(f"{name} = {fmt(value)}")
    if result is None:
        print(f"r unavailable: {reason}; verdict: insecure")
    else:
        print(f"r ({model.value}) = {fmt(result.r)}; verdict: {'secure' if result.secure else 'insecure'}")
    print(f"transcript: {transcript_path}\nsummary: {summary_path}")
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    for name in ("trials", "grid", "rounds"):
        if getattr(ns, name) < 1:
            raise UsageError(f"--{name} must be positive")
    names = checks.SUITES if ns.suite == "all" else (ns.suite,)
    results = checks.run_suites(
        names, trials=ns.trials, seed=ns.seed, perturb_lambda=ns.perturb_lambda, grid=ns.grid, rounds=ns.rounds
    )
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "threshold": cmd_threshold,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parse(argv)
        return COMMANDS[ns.command](ns)
    except SystemExit as exc:
        # argparse reports its own usage errors with code 2
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
