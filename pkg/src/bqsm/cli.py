"""Command-line experiment runner.

``bqsm run`` plays seeded protocol trials against a strategy (or runs one
analysis check with ``--check``) and writes BoundReports. ``bqsm verify``
runs the acceptance suite. Exit status is 0 on success, 2 for a bad
configuration and 3 when a bound is violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .adversary import make_committer, make_receiver
from .analysis import engine, privacy, suite, thresholds, uncertainty
from .analysis.binding import estimate_binding, honest_accept_prob
from .analysis.reports import CSV_FIELDS, SIGMAS, BoundReport, all_passed
from .coding import BASE_CODES, LinearCode, select_code
from .errors import BqsmError, ConfigError
from .memmodel import MemoryBound, MemoryNoise, WeakModelParams
from .protocols import COMMIT_RUNNERS, OT_RUNNERS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = 3

PROTOCOLS = tuple(OT_RUNNERS) + tuple(COMMIT_RUNNERS)
CHECKS = ("uncertainty", "minentropy", "pmax", "smallsets", "pa", "ball", "sender_privacy", "binding", "thresholds")


@dataclass
class ExperimentConfig:
    """Everything that determines a run; flags override a JSON config file."""

    protocol: str = "qot"
    n: int = 6
    strategy: str = "honest"
    trials: int = 1000
    seed: int = 0
    gamma: Optional[float] = None
    phi: float = 0.0
    eta: float = 0.0
    epsilon: float = 0.05
    code: Optional[str] = None
    memory: Optional[str] = None
    check: Optional[str] = None
    samples: int = 500
    out: Optional[str] = None
    format: str = "json"
    transcripts: int = 0

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}; choose from {', '.join(PROTOCOLS)}")
        if self.check is not None and self.check not in CHECKS:
            raise ConfigError(f"unknown check {self.check!r}; choose from {', '.join(CHECKS)}")
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.trials < 1 or self.samples < 1:
            raise ConfigError("trials and samples must be positive")
        if self.gamma is not None and not 0 <= self.gamma <= 1:
            raise ConfigError("gamma must lie in [0, 1]")
        if not 0 < self.epsilon < 0.5:
            raise ConfigError("epsilon must lie in (0, 1/2)")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.code is not None and self.code not in ("auto", "trivial", *BASE_CODES):
            raise ConfigError(f"unknown code {self.code!r}")
        if self.transcripts < 0:
            raise ConfigError("transcripts must be nonnegative")
        self.weak_params()
        self.memory_noise()

    def weak_params(self) -> WeakModelParams:
        try:
            return WeakModelParams(self.phi, self.eta)
        except BqsmError as exc:
            raise ConfigError(str(exc)) from exc

    def memory_noise(self) -> Optional[MemoryNoise]:
        """Parse ``kind:p`` (``erasure:0.75``); ``bounded`` or None means no noise."""
        if self.memory in (None, "bounded"):
            return None
        kind, _, p = self.memory.partition(":")
        try:
            return MemoryNoise(kind, float(p))
        except (BqsmError, ValueError) as exc:
            raise ConfigError(f"bad --memory {self.memory!r}: use erasure:p or depolarizing:p") from exc

    def to_dict(self) -> dict:
        """Replay configuration; the output location is not part of it."""
        d = asdict(self)
        d.pop("out")
        return d


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    names = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - names
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for name in names:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


# -- protocol runs ------------------------------------------------------------------


def _gamma(cfg: ExperimentConfig, memory: int) -> float:
    return memory / cfg.n if cfg.gamma is None else cfg.gamma


def _code_for(cfg: ExperimentConfig) -> LinearCode:
    if cfg.code in (None, "auto"):
        return select_code(cfg.n, cfg.phi, cfg.epsilon)
    return LinearCode(cfg.n, cfg.code)


def threshold_report(cfg: ExperimentConfig, gamma: float) -> BoundReport:
    thr = thresholds.threshold_gamma(cfg.protocol, cfg.phi, cfg.eta)
    ok = gamma < thr
    if not ok:
        warnings.warn(f"gamma={gamma:g} is not below the {cfg.protocol} threshold {thr:.4g}; security is not claimed",
                      RuntimeWarning, stacklevel=2)
    return BoundReport(name=f"{cfg.protocol} memory fraction below threshold", lhs=gamma, rhs=thr, method="closed-form",
                       tolerance=0.0, hypothesis_ok=ok,
                       details={"phi": cfg.phi, "eta": cfg.eta, "q": MemoryBound(gamma).q(cfg.n)})


def _ot_call(cfg: ExperimentConfig):
    runner = OT_RUNNERS[cfg.protocol]
    noise = cfg.memory_noise()
    if cfg.protocol.startswith("bb84"):
        params, code = cfg.weak_params(), _code_for(cfg)
        return lambda b, rc, rng: runner(b, cfg.n, params, code, rc, rng, noise=noise)
    return lambda b, rc, rng: runner(b, cfg.n, rc, rng, noise=noise)


def run_ot(cfg: ExperimentConfig) -> tuple[list, list]:
    factory = make_receiver(cfg.strategy, cfg.n, cfg.gamma)
    call = _ot_call(cfg)
    honest = cfg.strategy == "honest"
    a1 = correct_a1 = guessed = decode_fail = 0
    dumps = []
    for t in range(cfg.trials):
        b = t % 2
        tr = call(b, factory(), np.random.default_rng([cfg.seed, t]))
        tr.seed = [cfg.seed, t]
        out = tr.outputs
        a1 += out["a"]
        correct_a1 += out["a"] == 1 and out["b_prime"] == b
        guessed += out["b_prime"] == b
        decode_fail += bool(out.get("decode_failure"))
        if t < cfg.transcripts:
            dumps.append(tr.to_dict(include_private=True))
    trials = cfg.trials
    reports = []
    probe = factory()
    if honest:
        err = (a1 - correct_a1) / max(a1, 1)
        if cfg.protocol.startswith("bb84"):
            bound = _code_for(cfg).for_length(max(cfg.n // 2, 1)).failure_bound(cfg.phi)
            reports.append(BoundReport(name="wrong output given a=1", lhs=err, rhs=bound, method="monte-carlo",
                                       trials=a1, sigma=math.sqrt(max(bound * (1 - bound), err * (1 - err)) / max(a1, 1)),
                                       seed=cfg.seed, details={"decode_failures": decode_fail}))
        else:
            reports.append(BoundReport(name="wrong output given a=1", lhs=err, rhs=0.0, method="monte-carlo",
                                       trials=a1, seed=cfg.seed, tolerance=0.0,
                                       details={"Pr[b'=b | a=1]": correct_a1 / max(a1, 1)}))
        if not cfg.protocol.startswith("bb84"):
            s = math.sqrt(0.25 / trials)
            reports.append(BoundReport(name="|Pr[a=1] - 1/2|", lhs=abs(a1 / trials - 0.5), rhs=0.0, method="monte-carlo",
                                       trials=trials, sigma=s, seed=cfg.seed, details={"Pr[a=1]": a1 / trials}))
    rate = guessed / trials
    sigma = math.sqrt(max(rate * (1 - rate), 1.0 / trials) / trials)
    gamma = _gamma(cfg, getattr(probe, "memory", 0))
    if cfg.protocol in ("qot", "epr_qot") and cfg.n <= engine.MAX_N and cfg.memory_noise() is None:
        d = engine.total_distance(probe, cfg.n)
        reports.append(BoundReport(name=f"{probe.name} guess rate on b", lhs=rate, rhs=0.5 + d, method="monte-carlo",
                                   trials=trials, sigma=sigma, seed=cfg.seed, trivial=1.0, details={"exact_distance": d}))
        if not honest:
            reports.append(engine.check_sender_privacy(probe, gamma, cfg.n))
    else:
        reports.append(BoundReport(name=f"{probe.name} guess rate on b", lhs=rate, rhs=1.0, method="monte-carlo",
                                   trials=trials, sigma=sigma, seed=cfg.seed, trivial=1.0,
                                   details={"note": "no exact distance at this size or memory model"}))
    reports.append(threshold_report(cfg, gamma))
    return reports, dumps


def run_commit(cfg: ExperimentConfig) -> tuple[list, list]:
    factory = make_committer(cfg.strategy, cfg.n, cfg.gamma)
    probe = factory()
    gamma = _gamma(cfg, getattr(probe, "memory", 0))
    params = cfg.weak_params()
    reports = []
    dumps = []
    runner = COMMIT_RUNNERS[cfg.protocol]
    noise = cfg.memory_noise()

    def session(b, rng):
        if cfg.protocol == "comm_prime":
            return runner(b, cfg.n, params, cfg.epsilon, factory(), rng, noise=noise)
        return runner(b, cfg.n, factory(), rng, noise=noise)

    if cfg.strategy == "honest":
        accepted = 0
        for t in range(cfg.trials):
            s = session(t % 2, np.random.default_rng([cfg.seed, t]))
            accepted += s.open()
            s.transcript.seed = [cfg.seed, t]
            if t < cfg.transcripts:
                dumps.append(s.transcript.to_dict(include_private=True))
        rate = accepted / cfg.trials
        floor = honest_accept_prob(cfg.n, cfg.phi, cfg.epsilon) if cfg.protocol == "comm_prime" else 1.0
        reports.append(BoundReport(name="honest opening accepted", lhs=rate, rhs=floor, sense=">=", method="monte-carlo",
                                   trials=cfg.trials, sigma=math.sqrt(max(rate * (1 - rate), 1.0 / cfg.trials) / cfg.trials),
                                   seed=cfg.seed))
    else:
        for t in range(min(cfg.transcripts, cfg.trials)):
            s = session(0, np.random.default_rng([cfg.seed, t, 0]))
            s.open(0)
            s.transcript.seed = [cfg.seed, t, 0]
            dumps.append(s.transcript.to_dict(include_private=True))
    reports.append(estimate_binding(factory, cfg.n, cfg.trials, cfg.seed, protocol=cfg.protocol, params=params,
                                    epsilon=cfg.epsilon, gamma=gamma))
    reports.append(threshold_report(cfg, gamma))
    return reports, dumps


# -- single checks --------------------------------------------------------------------


def run_check(cfg: ExperimentConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    sizes = tuple(range(1, min(cfg.n, 6) + 1))
    if cfg.check in ("uncertainty", "minentropy", "pmax", "smallsets"):
        states, regs = uncertainty.random_states(cfg.samples, rng, a_sizes=sizes)
    if cfg.check == "uncertainty":
        return [uncertainty.uncertainty_sweep(states, regs, 2, seed=cfg.seed),
                uncertainty.uncertainty_sweep(states, regs, 3, seed=cfg.seed)]
    if cfg.check == "minentropy":
        return [_worst(f"min-entropy sum N={k}", [uncertainty.check_minentropy_sum(s, k, r) for s, r in zip(states, regs)], cfg.seed)
                for k in (1, 2)]
    if cfg.check == "pmax":
        return [_worst("max-probability product", [uncertainty.check_pmax_product(s, r) for s, r in zip(states, regs)], cfg.seed)]
    if cfg.check == "smallsets":
        gamma = 0.0 if cfg.gamma is None else cfg.gamma
        return [_worst(f"small-set mass gamma={gamma:g}",
                       [uncertainty.check_small_sets_mass(s, gamma, register=r) for s, r in zip(states, regs)], cfg.seed)]
    if cfg.check == "pa":
        return [_worst("privacy amplification", [privacy.check_pa_bound(e) for e in suite.pa_ensembles(cfg.samples, cfg.seed)], cfg.seed)]
    if cfg.check == "ball":
        n = min(cfg.n, 8)
        q = MemoryBound(cfg.gamma or 0.0).q(n)
        guesser = privacy.Guesser.measure([0] * q, lambda y: list(y) + [0] * (n - q))
        e = privacy.bb84_ensemble(n, {i: 0 for i in range(q)})
        return [privacy.check_ball_guess(e, guesser, 1 / 8)]
    if cfg.check == "sender_privacy":
        probe = make_receiver(cfg.strategy, cfg.n, cfg.gamma)()
        gamma = _gamma(cfg, getattr(probe, "memory", 0))
        noise = cfg.memory_noise()
        kind, p = ("bounded", 0.0) if noise is None else (noise.kind, noise.p)
        return [engine.check_sender_privacy(probe, gamma, cfg.n, memory=kind, p=p)]
    if cfg.check == "binding":
        factory = make_committer(cfg.strategy, cfg.n, cfg.gamma)
        return [estimate_binding(factory, cfg.n, cfg.trials, cfg.seed, gamma=cfg.gamma)]
    if cfg.check == "thresholds":
        return [threshold_report(cfg, cfg.gamma if cfg.gamma is not None else 0.0)]
    raise ConfigError(f"unknown check {cfg.check!r}")


def _worst(name: str, reports: list, seed) -> BoundReport:
    worst = min(reports, key=lambda r: r.margin)
    return BoundReport(name=f"{name} over {len(reports)} samples (worst)", lhs=worst.lhs, rhs=worst.rhs, sense=worst.sense,
                       seed=seed, trivial=worst.trivial,
                       extra_conditions={"no violations": all(r.passed for r in reports)},
                       details={"violations": sum(not r.passed for r in reports), "worst": worst.name})


# -- output -----------------------------------------------------------------------------


def render(cfg_dict: dict, reports: list, fmt: str) -> str:
    if fmt == "json":
        doc = {"version": __version__, "config": cfg_dict, "seed": cfg_dict.get("seed"),
               "reports": [r.to_dict() for r in reports], "all_passed": all_passed(reports)}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(cfg_dict, sort_keys=True)}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.to_dict())
    return buf.getvalue()


def write_outputs(out: Optional[str], cfg_dict: dict, reports: list, fmt: str, dumps: list) -> None:
    if out is None:
        return
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    (path / f"report.{fmt}").write_text(render(cfg_dict, reports, fmt))
    if dumps:
        tdir = path / "transcripts"
        tdir.mkdir(exist_ok=True)
        for i, d in enumerate(dumps):
            (tdir / f"{i:03d}.json").write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")


def _print_reports(cfg_dict: dict, reports: list, stream) -> None:
    print(f"config: {json.dumps(cfg_dict, sort_keys=True)}", file=stream)
    for r in reports:
        print(r.line(), file=stream)


def _status(reports: list) -> int:
    return EXIT_OK if all_passed(reports) else EXIT_VIOLATION


def cmd_run(args) -> int:
    cfg = load_config(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if cfg.check is not None:
            reports, dumps = run_check(cfg), []
        elif cfg.protocol in OT_RUNNERS:
            reports, dumps = run_ot(cfg)
        else:
            reports, dumps = run_commit(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    cfg_dict = cfg.to_dict()
    _print_reports(cfg_dict, reports, sys.stdout)
    write_outputs(cfg.out, cfg_dict, reports, cfg.format, dumps)
    return _status(reports)


QUICK = {
    1: {"samples": 100}, 2: {"samples": 100}, 3: {"samples": 100}, 4: {"count": 50},
    5: {"trials": 1000, "bb84_trials": 100}, 6: {"trials": 5}, 7: {"trials": 200, "random_trials": 1000},
    8: {"trials": 2000, "prime_trials": 50}, 11: {"trials": 500}, 12: {"trials": 50},
}


def cmd_verify(args) -> int:
    only = None
    if args.criteria:
        try:
            only = {int(c) for c in args.criteria.split(",")}
        except ValueError as exc:
            raise ConfigError(f"--criteria takes comma-separated numbers, got {args.criteria!r}") from exc
        if not only <= set(range(1, 13)):
            raise ConfigError("criteria are numbered 1 to 12")
    cfg_dict = {"criteria": sorted(only) if only else "all", "quick": args.quick}
    reports = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.protocol or args.gamma is not None or args.phi or args.eta:
            cfg = ExperimentConfig(protocol=args.protocol or "qot", phi=args.phi or 0.0, eta=args.eta or 0.0,
                                   gamma=args.gamma)
            cfg.validate()
            cfg_dict.update(protocol=cfg.protocol, gamma=cfg.gamma, phi=cfg.phi, eta=cfg.eta)
            reports.append(threshold_report(cfg, cfg.gamma if cfg.gamma is not None else 0.0))
        results = []
        for c in suite.criteria():
            if only is not None and c.number not in only:
                continue
            c.execute(**(QUICK.get(c.number, {}) if args.quick else {}))
            results.append(c)
            print(c.line())
            for r in c.reports:
                if r.status != "pass":
                    print(f"    {r.line()}")
            reports.extend(c.reports)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"{sum(c.passed for c in results)}/{len(results)} criteria passed; "
          f"{sum(r.is_failure for r in reports)} failed bounds")
    for r in reports[: 1 if cfg_dict.get("protocol") else 0]:
        print(r.line())
    write_outputs(args.out, cfg_dict, reports, args.format, [])
    if not all(c.passed for c in results):
        return EXIT_VIOLATION
    return _status(reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bqsm", description="Bounded quantum-storage protocol laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded protocol trials or a single analysis check")
    run.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    run.add_argument("--protocol", choices=PROTOCOLS)
    run.add_argument("--n", type=int)
    run.add_argument("--strategy", help="e.g. honest, store_subset:2:plus, bell_xor, measure_all:0, bounded:2")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--gamma", type=float)
    run.add_argument("--phi", type=float)
    run.add_argument("--eta", type=float)
    run.add_argument("--epsilon", type=float)
    run.add_argument("--code", help="auto, trivial, " + ", ".join(BASE_CODES))
    run.add_argument("--memory", help="bounded, erasure:p or depolarizing:p")
    run.add_argument("--check", choices=CHECKS)
    run.add_argument("--samples", type=int)
    run.add_argument("--out", help="output directory for report and transcripts")
    run.add_argument("--format", choices=("json", "csv"))
    run.add_argument("--transcripts", type=int, help="dump the first K trial transcripts")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="run the acceptance suite")
    ver.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    ver.add_argument("--quick", action="store_true", help="reduced sample sizes")
    ver.add_argument("--protocol", choices=PROTOCOLS)
    ver.add_argument("--gamma", type=float)
    ver.add_argument("--phi", type=float)
    ver.add_argument("--eta", type=float)
    ver.add_argument("--out")
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, BqsmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
