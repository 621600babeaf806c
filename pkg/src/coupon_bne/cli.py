"""Command line front end for the equilibrium solvers.

Subcommands::

    coupon-bne solve   --config game.json [--format text|json|csv] [--out P]
    coupon-bne verify  --config game.json --profile solved.json [--tol T]
    coupon-bne sweep   --config sweep.json [--skip-infeasible] [--out P]
    coupon-bne cases   --config sampler.json [--seed N]
    coupon-bne epsilon --p 0.9 --q 0.8

The config is a single JSON document whose field names mirror the model
symbols: ``d0``, ``rho0``/``rho1`` (or the symmetric shorthand ``rho``),
``m00``..``m11``, ``v``.  The ``game`` field selects the variant
(``privacy_aware``, ``scoring``, ``identity``, ``identity_continuous``,
``optout``).  ``solve --format csv`` emits the utility surface with
columns ``p,q,u_b0,u_b1,u_a``; ``sweep`` emits one CSV row per step of
the axis named in the ``sweep`` config block.

Output is byte-identical for identical config + seed: JSON is printed
with sorted keys and indent 2, CSV uses '.' decimals and LF endings,
floats render with ``repr`` (shortest round-trip), and non-finite values
are encoded as the strings "inf"/"-inf".

Exit codes: 0 ok, 1 verification or property failure, 2 usage/config
error, 3 infeasible game.  The env var COUPON_BNE_THREADS caps the
thread count of the grid-scan kernels (see ``_kernels``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from typing import Optional

from . import identity_game, optout_game, oracle, privacy, scoring, scoring_game
from .core import (
    BStrategy,
    CouponValues,
    EquilibriumReport,
    GameUtilities,
    GuessPolicy,
    IdentityGame,
    IdentityGameContinuous,
    OptOutGame,
    OptOutPolicy,
    PaymentMatrix,
    Prior,
    PrivacyAwareParams,
    ScoringGame,
    ScoringReportPair,
    ZeroSignalMass,
    bayes_posteriors,
)


class ConfigError(ValueError):
    """Bad config or profile input; maps to exit code 2."""


class InfeasibleGame(RuntimeError):
    """Parameters outside the solvable region; maps to exit code 3."""


# ---------------------------------------------------------------------------
# Config ingestion.


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return doc


def _number(cfg: dict, key: str, default=None) -> float:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"config is missing the required field {key!r}")
        return default
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"config field {key!r} must be a number, got {val!r}")
    return float(val)


def _coupons(cfg: dict) -> CouponValues:
    if "rho" in cfg:
        if "rho0" in cfg or "rho1" in cfg:
            raise ConfigError("give either rho or rho0/rho1, not both")
        rho = _number(cfg, "rho")
        return CouponValues(rho, rho)
    return CouponValues(_number(cfg, "rho0"), _number(cfg, "rho1"))


def _distribution(doc, where: str):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError(f"{where} must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "uniform":
            return identity_game.UniformDist(
                _number(doc, "lo", 0.0), _number(doc, "hi")
            )
        if kind == "exponential":
            return identity_game.ExponentialDist(_number(doc, "rate"))
        if kind == "piecewise":
            return identity_game.PiecewiseLinearCdf(doc.get("knots", ()))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad {where}: {exc}") from exc
    raise ConfigError(f"unknown distribution kind {kind!r} in {where}")


def build_game(cfg: dict):
    """Construct the game container the config describes."""
    kind = cfg.get("game")
    try:
        prior = Prior.from_d0(_number(cfg, "d0"))
        if kind == "privacy_aware":
            return PrivacyAwareParams(prior, _coupons(cfg), _number(cfg, "v"))
        if kind == "scoring":
            rule = scoring.get_rule(str(cfg.get("rule", "quadratic")))
            return ScoringGame(prior, _coupons(cfg), rule)
        if kind == "identity":
            return IdentityGame(prior, _coupons(cfg))
        if kind == "identity_continuous":
            dist0 = _distribution(cfg.get("dist"), "dist")
            dist1 = (
                _distribution(cfg.get("dist1"), "dist1")
                if "dist1" in cfg
                else None
            )
            return IdentityGameContinuous(prior, dist0, dist1)
        if kind == "optout":
            m = PaymentMatrix(
                _number(cfg, "m00"),
                _number(cfg, "m01"),
                _number(cfg, "m10"),
                _number(cfg, "m11"),
            )
            return OptOutGame(prior, _coupons(cfg), m)
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(
        "config field 'game' must be one of privacy_aware, scoring, "
        f"identity, identity_continuous, optout; got {kind!r}"
    )


# ---------------------------------------------------------------------------
# Solving and report assembly.


def _strawman_violations(prior: Prior, m: PaymentMatrix) -> list:
    """The blind-accusation inequalities that fail, spelled out."""
    out = []
    if m.m00 * prior.d0 >= m.m01 * prior.d1:
        out.append(
            "m00*D0 < m01*D1 fails: "
            f"{m.m00!r}*{prior.d0!r} >= {m.m01!r}*{prior.d1!r}"
        )
    if m.m11 * prior.d1 >= m.m10 * prior.d0:
        out.append(
            "m11*D1 < m10*D0 fails: "
            f"{m.m11!r}*{prior.d1!r} >= {m.m10!r}*{prior.d0!r}"
        )
    return out


def _posteriors_or_none(prior: Prior, b: BStrategy):
    try:
        return bayes_posteriors(prior, b)
    except ZeroSignalMass as exc:
        mu = [None, None]
        masses = (
            prior.d0 * b.p + prior.d1 * (1.0 - b.q),
            prior.d0 * (1.0 - b.p) + prior.d1 * b.q,
        )
        for sig in (0, 1):
            if sig != exc.signal and masses[sig] > 0.0:
                type1 = prior.d1 * b.q if sig == 1 else prior.d1 * (1.0 - b.q)
                mu[sig] = type1 / masses[sig]
        return tuple(mu)


def _scoring_b_utilities(game: ScoringGame, b: BStrategy, a: ScoringReportPair):
    rho0, rho1 = game.coupons.rho0, game.coupons.rho1
    pay0_t, pay0_l = scoring.f0(game.rule, a.x0), scoring.f0(game.rule, a.x1)
    pay1_t, pay1_l = scoring.f1(game.rule, a.x1), scoring.f1(game.rule, a.x0)
    u_b0 = b.p * (rho0 - pay0_t) - (1.0 - b.p) * pay0_l
    u_b1 = b.q * (rho1 - pay1_t) - (1.0 - b.q) * pay1_l
    return u_b0, u_b1


def solve_game(game):
    """Dispatch to the right solver; returns (report, extras).

    ``extras`` holds the per-game scalar columns the sweep command prints
    (report fields only cover what every variant shares).
    """
    if isinstance(game, PrivacyAwareParams):
        res = privacy.solve_privacy_aware(game)
        eps = privacy.dp_epsilon(res.strategy)
        report = EquilibriumReport(
            game=game.kind,
            case_label="Interior" if res.strategy.p == res.strategy.q else "Corner",
            b_strategy=res.strategy,
            a_strategy=None,
            posteriors=_posteriors_or_none(game.prior, res.strategy),
            utilities=GameUtilities(u_b=res.utility),
            dp_epsilon=eps,
            unique=not res.note,
            notes=(res.note,) if res.note else (),
        )
        return report, {
            "p": res.strategy.p,
            "q": res.strategy.q,
            "epsilon": eps,
            "u_b": res.utility,
        }

    if isinstance(game, ScoringGame):
        rho = game.symmetric_rho
        if rho is not None and game.rule.symmetric:
            res = scoring_game.solve_scoring_bne(game.prior, rho, game.rule)
        else:
            res = scoring_game.solve_scoring_bne_asymmetric(
                game.prior, game.coupons, game.rule
            )
        u_b0, u_b1 = _scoring_b_utilities(game, res.b, res.a)
        u_b = game.prior.d0 * u_b0 + game.prior.d1 * u_b1
        report = EquilibriumReport(
            game=game.kind,
            case_label=res.regime,
            b_strategy=res.b,
            a_strategy=res.a,
            posteriors=_posteriors_or_none(game.prior, res.b),
            utilities=GameUtilities(u_a=res.a_profit, u_b0=u_b0, u_b1=u_b1, u_b=u_b),
            dp_epsilon=res.posterior_epsilon,
            unique=res.unique,
            notes=res.notes,
        )
        return report, {
            "p": res.b.p,
            "q": res.b.q,
            "y0": res.a.x0,
            "y1": res.a.x1,
            "epsilon": res.posterior_epsilon,
            "a_profit": res.a_profit,
            "benchmark_profit": res.benchmark_profit,
        }

    if isinstance(game, IdentityGame):
        res = identity_game.solve_identity_bne(game.prior, game.coupons)
        u_a, u_b0, u_b1 = identity_game.identity_utilities(
            game.prior, game.coupons, res.b, res.a
        )
        u_b = game.prior.d0 * u_b0 + game.prior.d1 * u_b1
        set_valued = any(
            iv is not None
            for iv in (res.y_interval, res.x_interval, res.b_p_interval, res.support)
        )
        notes = res.notes
        for label, iv in (
            ("y interval", res.y_interval),
            ("x interval", res.x_interval),
            ("p interval", res.b_p_interval),
            ("support", res.support),
        ):
            if iv is not None:
                notes = notes + (f"{label}: [{iv.lo!r}, {iv.hi!r}]",)
        report = EquilibriumReport(
            game=game.kind,
            case_label=res.case,
            b_strategy=res.b,
            a_strategy=res.a,
            posteriors=_posteriors_or_none(game.prior, res.b),
            utilities=GameUtilities(u_a=u_a, u_b0=u_b0, u_b1=u_b1, u_b=u_b),
            dp_epsilon=res.dp_epsilon,
            unique=not set_valued,
            notes=notes,
        )
        return report, {
            "p": res.b.p,
            "q": res.b.q,
            "x": res.a.x,
            "y": res.a.y,
            "epsilon": res.dp_epsilon,
        }

    if isinstance(game, IdentityGameContinuous):
        try:
            res = identity_game.solve_continuous_threshold(
                game.prior, game.dist0, game.dist1
            )
        except ValueError as exc:
            raise InfeasibleGame(str(exc)) from exc
        notes = ()
        if res.t.interval is not None:
            notes = (
                f"threshold flat on [{res.t.interval.lo!r}, {res.t.interval.hi!r}]",
            )
        report = EquilibriumReport(
            game=game.kind,
            case_label="Threshold",
            b_strategy=res.t,
            a_strategy=res.a,
            posteriors=None,
            utilities=GameUtilities(),
            dp_epsilon=res.dp_epsilon,
            unique=res.t.interval is None,
            notes=notes,
        )
        return report, {"y_star": res.a.y, "epsilon": res.dp_epsilon}

    if isinstance(game, OptOutGame):
        try:
            res = optout_game.solve_optout_bne(game.prior, game.matrix, game.coupons)
        except optout_game.DivisionByZero as exc:
            raise InfeasibleGame(str(exc)) from exc
        if res.case.label == optout_game.OptOutCase.INFEASIBLE:
            raise InfeasibleGame(
                "; ".join(_strawman_violations(game.prior, game.matrix))
            )
        if res.b is None:
            report = EquilibriumReport(
                game=game.kind,
                case_label=res.case.label,
                b_strategy=None,
                a_strategy=None,
                unique=False,
                notes=res.notes + (f"matching rows: {', '.join(res.case.rows)}",),
            )
            return report, {}
        u_a, u_b0, u_b1 = optout_game.optout_utilities(
            game.prior, game.matrix, game.coupons, res.b, res.a
        )
        u_b = game.prior.d0 * u_b0 + game.prior.d1 * u_b1
        notes = res.notes
        if res.b_point:
            notes = notes + (f"signaling point {res.b_point}",)
        report = EquilibriumReport(
            game=game.kind,
            case_label=res.case.label,
            b_strategy=res.b,
            a_strategy=res.a,
            posteriors=_posteriors_or_none(game.prior, res.b),
            utilities=GameUtilities(u_a=u_a, u_b0=u_b0, u_b1=u_b1, u_b=u_b),
            dp_epsilon=res.dp_epsilon,
            unique=True,
            notes=notes,
        )
        return report, {
            "p": res.b.p,
            "q": res.b.q,
            "x0": res.a.x0,
            "y1": res.a.y1,
            "epsilon": res.dp_epsilon,
            "rr": res.rr,
        }

    raise ConfigError(f"no solver for {type(game).__name__}")


# ---------------------------------------------------------------------------
# Rendering.


def _fmt(value) -> str:
    """Scalar to text: repr floats, inf as a bare word, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def jsonable(value):
    """Recursively convert to JSON-safe data; non-finite floats to strings."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def render_json(doc: dict) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True) + "\n"


def render_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _strategy_json(strategy) -> Optional[dict]:
    if strategy is None:
        return None
    if isinstance(strategy, BStrategy):
        return {"p": strategy.p, "q": strategy.q}
    if isinstance(strategy, ScoringReportPair):
        return {"x0": strategy.x0, "x1": strategy.x1}
    if isinstance(strategy, GuessPolicy):
        return {"x": strategy.x, "y": strategy.y}
    if isinstance(strategy, OptOutPolicy):
        return {
            "x0": strategy.x0,
            "x1": strategy.x1,
            "y0": strategy.y0,
            "y1": strategy.y1,
        }
    if isinstance(strategy, identity_game.ThresholdStrategy):
        doc = {"t": strategy.t}
        if strategy.interval is not None:
            doc["interval"] = [strategy.interval.lo, strategy.interval.hi]
        return doc
    raise TypeError(f"cannot render strategy {strategy!r}")


def report_doc(report: EquilibriumReport) -> dict:
    posteriors = None
    if report.posteriors is not None:
        posteriors = {"mu0": report.posteriors[0], "mu1": report.posteriors[1]}
    return {
        "game": report.game,
        "case": report.case_label,
        "b": _strategy_json(report.b_strategy),
        "a": _strategy_json(report.a_strategy),
        "posteriors": posteriors,
        "epsilon": report.dp_epsilon,
        "utilities": {
            "u_a": report.utilities.u_a,
            "u_b0": report.utilities.u_b0,
            "u_b1": report.utilities.u_b1,
            "u_b": report.utilities.u_b,
        },
        "unique": report.unique,
        "notes": list(report.notes),
    }


def _strategy_text(strategy) -> str:
    doc = _strategy_json(strategy)
    if doc is None:
        return ""
    return " ".join(f"{k}={_fmt(v)}" for k, v in doc.items())


def report_text(report: EquilibriumReport) -> str:
    lines = [
        f"game: {report.game}",
        f"case: {report.case_label}",
        f"b: {_strategy_text(report.b_strategy)}",
        f"a: {_strategy_text(report.a_strategy)}",
    ]
    if report.posteriors is not None:
        mu0, mu1 = report.posteriors
        lines.append(f"posteriors: mu0={_fmt(mu0)} mu1={_fmt(mu1)}")
    lines.append(f"epsilon: {_fmt(report.dp_epsilon)}")
    u = report.utilities
    lines.append(
        "utilities: "
        f"u_a={_fmt(u.u_a)} u_b0={_fmt(u.u_b0)} u_b1={_fmt(u.u_b1)} u_b={_fmt(u.u_b)}"
    )
    lines.append(f"unique: {_fmt(report.unique)}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_solve(args) -> int:
    cfg = load_json(args.config)
    game = build_game(cfg)
    if args.format == "csv":
        if isinstance(game, IdentityGameContinuous):
            raise ConfigError("no utility surface for the continuous variant")
        grid = args.grid if args.grid is not None else 1e-2
        resolution = int(round(1.0 / grid)) + 1
        rows = oracle.utility_surface(game, resolution=resolution)
        _emit(render_csv(("p", "q", "u_b0", "u_b1", "u_a"), rows), args.out)
        return 0
    report, _ = solve_game(game)
    if args.format == "json":
        _emit(render_json(report_doc(report)), args.out)
    else:
        _emit(report_text(report), args.out)
    return 0


def _profile_strategies(kind: str, profile: dict):
    """Pull (b, a) out of a solve document, per game variant."""
    try:
        b_doc = profile["b"]
        b = BStrategy(float(b_doc["p"]), float(b_doc["q"]))
        if kind == "privacy_aware":
            return b, None
        a_doc = profile["a"]
        if kind == "scoring":
            return b, ScoringReportPair(float(a_doc["x0"]), float(a_doc["x1"]))
        if kind == "identity":
            return b, GuessPolicy(float(a_doc["x"]), float(a_doc["y"]))
        if kind == "optout":
            return b, OptOutPolicy(
                float(a_doc["x0"]),
                float(a_doc["x1"]),
                float(a_doc["y0"]),
                float(a_doc["y1"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"profile does not fit a {kind} game: {exc}") from exc
    raise ConfigError(f"cannot verify a {kind} profile")


def cmd_verify(args) -> int:
    cfg = load_json(args.config)
    game = build_game(cfg)
    tol = args.tol if args.tol is not None else 1e-9
    if tol <= 0.0:
        raise ConfigError("tol must be positive")
    profile = load_json(args.profile)

    if isinstance(game, IdentityGameContinuous):
        # Grid gaps do not apply; recheck the threshold condition itself.
        try:
            y_star = float(profile["a"]["y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"profile has no threshold guess: {exc}") from exc
        level = game.prior.d0 * game.dist0.cdf(y_star) + game.prior.d1 * game.dist1.cdf(
            y_star
        )
        residual = abs(level - game.prior.d1)
        top = game.prior.d0 * game.dist0.cdf(1.0) + game.prior.d1 * game.dist1.cdf(1.0)
        ok = residual <= tol or (y_star >= 1.0 - 1e-12 and top < game.prior.d1)
        text = [f"y_star: {_fmt(y_star)}", f"residual: {_fmt(residual)}"]
        text.append("PASS" if ok else "FAIL")
        _emit("\n".join(text) + "\n", args.out)
        return 0 if ok else 1

    b, a = _profile_strategies(cfg.get("game"), profile)
    grid = args.grid if args.grid is not None else 1e-3
    try:
        rep = oracle.best_response_gap(game, b, a, grid_step=grid)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    lines = [
        f"gap_a: {_fmt(rep.gap_a)}",
        f"gap_b0: {_fmt(rep.gap_b0)}",
        f"gap_b1: {_fmt(rep.gap_b1)}",
        f"grid: {_fmt(rep.grid_step)}",
        f"tol: {_fmt(tol)}",
    ]
    ok = rep.within(tol)
    lines.append("PASS" if ok else "FAIL")
    for dev in rep.argmax_deviations:
        lines.append(f"deviation: {dev}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


_SWEEP_AXES = ("rho", "rho0", "rho1", "v", "d0")

_SWEEP_COLUMNS = {
    "privacy_aware": ("p", "q", "epsilon", "u_b"),
    "scoring": ("p", "q", "y0", "y1", "epsilon", "a_profit", "benchmark_profit"),
    "identity": ("p", "q", "x", "y", "epsilon"),
    "identity_continuous": ("y_star", "epsilon"),
    "optout": ("p", "q", "x0", "y1", "epsilon", "rr"),
}


def cmd_sweep(args) -> int:
    cfg = load_json(args.config)
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep needs a config with a 'sweep' object")
    axis = sweep.get("axis")
    if axis not in _SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {_SWEEP_AXES}, got {axis!r}")
    start = _number(sweep, "start")
    stop = _number(sweep, "stop")
    steps = sweep.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise ConfigError(f"sweep steps must be an integer >= 2, got {steps!r}")

    base = {k: v for k, v in cfg.items() if k != "sweep"}
    kind = base.get("game")
    if kind not in _SWEEP_COLUMNS:
        raise ConfigError(f"unknown game {kind!r}")
    if axis in ("rho0", "rho1") and "rho" in base:
        base["rho0"] = base["rho1"] = base.pop("rho")
    if axis == "rho" and ("rho0" in base or "rho1" in base):
        base.pop("rho0", None)
        base.pop("rho1", None)

    columns = _SWEEP_COLUMNS[kind]
    header = ("step", axis, "case") + columns
    rows = []
    for i in range(steps):
        value = start + (stop - start) * i / (steps - 1)
        step_cfg = dict(base)
        step_cfg[axis] = value
        try:
            game = build_game(step_cfg)
            report, extras = solve_game(game)
        except InfeasibleGame as exc:
            if args.skip_infeasible:
                continue
            sys.stderr.write(f"step {i} ({axis}={value!r}) infeasible: {exc}\n")
            return 3
        rows.append((i, value, report.case_label) + tuple(
            extras.get(c) for c in columns
        ))

    if args.format == "json":
        docs = [dict(zip(header, row)) for row in rows]
        _emit(render_json({"axis": axis, "rows": docs}), args.out)
    else:
        _emit(render_csv(header, rows), args.out)
    return 0


def cmd_cases(args) -> int:
    cfg = load_json(args.config)
    params = cfg.get("cases", {})
    if not isinstance(params, dict):
        raise ConfigError("'cases' must be an object")
    count = params.get("count", 1000)
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ConfigError(f"cases count must be a positive integer, got {count!r}")
    margin = _number(params, "margin", 1e-6)
    require = params.get("require_case")
    ranges = params.get("ranges")
    try:
        samples = optout_game.sample_cases(
            count, args.seed, margin=margin, require_case=require, ranges=ranges
        )
    except (ValueError, RuntimeError) as exc:
        raise ConfigError(str(exc)) from exc

    counts: Counter = Counter()
    inconsistent = 0
    for prior, m, coupons in samples:
        try:
            counts[optout_game.classify_case(prior, m, coupons).label] += 1
        except optout_game.InternalInconsistency:
            inconsistent += 1

    labels = sorted(counts)
    if args.format == "json":
        doc = {
            "samples": count,
            "counts": {label: counts[label] for label in labels},
            "inconsistencies": inconsistent,
        }
        _emit(render_json(doc), args.out)
    elif args.format == "csv":
        _emit(render_csv(("case", "count"), [(l, counts[l]) for l in labels]), args.out)
    else:
        lines = [f"samples: {count}"]
        lines.extend(f"{label}: {counts[label]}" for label in labels)
        lines.append(f"inconsistencies: {inconsistent}")
        _emit("\n".join(lines) + "\n", args.out)
    if inconsistent:
        sys.stderr.write(f"{inconsistent} draws matched no or several cases\n")
        return 1
    return 0


def cmd_epsilon(args) -> int:
    try:
        b = BStrategy(args.p, args.q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    x = privacy.x_game(b)
    eps = privacy.dp_epsilon(b)
    rr = privacy.is_randomized_response(b)
    if args.format == "json":
        doc = {"p": b.p, "q": b.q, "X": x, "epsilon": eps, "randomized_response": rr}
        _emit(render_json(doc), args.out)
    elif args.format == "csv":
        _emit(
            render_csv(
                ("p", "q", "X", "epsilon", "randomized_response"),
                [(b.p, b.q, x, eps, rr)],
            ),
            args.out,
        )
    else:
        _emit(
            f"X: {_fmt(x)}\nepsilon: {_fmt(eps)}\nrandomized_response: {_fmt(rr)}\n",
            args.out,
        )
    return 0


# ---------------------------------------------------------------------------
# Entry point.


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupon-bne",
        description="Solve, verify, and sweep coupon signaling games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--grid", type=float, default=None, help="grid step")
        p.add_argument("--tol", type=float, default=None, help="gap tolerance")
        p.add_argument("--seed", type=int, default=0, help="sampler seed")
        p.add_argument(
            "--format", choices=("text", "json", "csv"), default="text"
        )
        p.add_argument("--out", default=None, help="write output to this path")

    common(sub.add_parser("solve", help="solve the configured game"))
    verify = sub.add_parser("verify", help="audit a solved profile")
    common(verify)
    verify.add_argument("--profile", required=True, help="solve JSON output path")
    sweep = sub.add_parser("sweep", help="solve along one parameter axis")
    common(sweep)
    sweep.add_argument(
        "--skip-infeasible",
        action="store_true",
        help="drop infeasible steps instead of failing",
    )
    common(sub.add_parser("cases", help="sample and classify opt-out parameters"))
    epsilon = sub.add_parser("epsilon", help="leakage of a signaling strategy")
    common(epsilon, config_required=False)
    epsilon.add_argument("--p", type=float, required=True)
    epsilon.add_argument("--q", type=float, required=True)
    return parser


_COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "cases": cmd_cases,
    "epsilon": cmd_epsilon,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.grid is not None and args.grid <= 0.0:
        sys.stderr.write("error: --grid must be positive\n")
        return 2
    if not 0 <= args.seed < 2**64:
        sys.stderr.write("error: --seed must fit in 64 unsigned bits\n")
        return 2
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InfeasibleGame as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return 3
    except ArithmeticError as exc:
        # Solver-side breakdowns (dead branches, no interior crossing).
        sys.stderr.write(f"infeasible: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
