"""Command-line front end: ``release``, ``estimate`` and ``simulate``.

Exit codes: 0 on success, 1 on I/O failure, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import secrets
import sys

from .core import ConfigError, Mechanism, Method, NoisyRelease, PrivacySpec
from .mechanisms import ConfidentialSample, release
from .randkit import make_rng
from .sim_harness import Scenario, build_grid, estimate, run_grid

CSV_HEADER = ["method", "mechanism", "n", "p_true", "epsilon", "alpha", "runs", "seed",
              "coverage", "avg_length", "oob_rate"]

ESTIMATE_METHODS = [m.value for m in (Method.WALD_PLUGIN, Method.WILSON_PLUGIN,
                                      Method.BAYES_UNIFORM, Method.BAYES_JEFFREYS,
                                      Method.TWO_STEP, Method.EXACT)]
MECHANISMS = [m.value for m in Mechanism]

# key -> (parser for one item, is the key a grid axis)
CONFIG_KEYS = {
    "n": (int, True),
    "p": (float, True),
    "epsilon": (float, True),
    "mechanism": (str, True),
    "methods": (str, True),
    "alpha": (float, True),
    "runs": (int, False),
    "seed": (int, False),
    "draws": (int, False),
    "burn_in": (int, False),
    "t": (int, False),
    "s": (int, False),
    "out": (str, False),
}


class UsageError(Exception):
    """Bad command-line or configuration input (exit code 2)."""


def _resolve_seed(seed):
    if seed is not None:
        return seed
    seed = secrets.randbits(63)
    print(f"seed={seed}", file=sys.stderr)
    return seed


def _privacy_spec(mechanism, n, epsilon, sigma2):
    mech = Mechanism(mechanism)
    if mech is Mechanism.LAPLACE:
        if sigma2 is not None:
            raise UsageError("--sigma2 applies only to the discrete-gaussian mechanism")
        return PrivacySpec.laplace(n, epsilon)
    return PrivacySpec.discrete_gaussian(n, epsilon, sigma2)


def cmd_release(args):
    spec = _privacy_spec(args.mechanism, args.n, args.epsilon, args.sigma2)
    rng = make_rng(_resolve_seed(args.seed))
    rel = release(ConfidentialSample(args.k, args.n), spec, rng)
    print(f"phat_star={rel.phat_star:.10g} mechanism={spec.mechanism.value} "
          f"n={args.n} epsilon={args.epsilon:g}")
    return 0


def cmd_estimate(args):
    method = Method(args.method)
    mech = Mechanism(args.mechanism)
    if method is Method.EXACT and mech is not Mechanism.LAPLACE:
        raise UsageError("the exact method supports only the laplace mechanism")
    if method in (Method.WALD_PLUGIN, Method.WILSON_PLUGIN, Method.TWO_STEP) \
            and mech is not Mechanism.LAPLACE:
        raise UsageError(f"{method.value} supports only the laplace mechanism")
    spec = _privacy_spec(args.mechanism, args.n, args.epsilon, args.sigma2)
    rel = NoisyRelease(args.phat_star, args.n, spec)
    sc = Scenario(method=method, mechanism=mech, n=args.n, p_true=0.5, epsilon=args.epsilon,
                  alpha=args.alpha, draws=args.draws, burn_in=args.burn_in, T=args.t, S=args.s,
                  sigma2=args.sigma2, literal_likelihood=args.paper_literal_likelihood,
                  grid_exact=args.grid_exact)
    needs_rng = method not in (Method.WALD_PLUGIN, Method.WILSON_PLUGIN)
    rng = make_rng(_resolve_seed(args.seed)) if needs_rng else None
    est = estimate(method, rel, sc, rng)
    print(f"lower={est.lower:.10g} upper={est.upper:.10g} "
          f"out_of_bounds={'true' if est.out_of_bounds else 'false'} method={method.value}")
    return 0


def _split_items(raw):
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_config(text):
    """Parse ``key = value`` lines into a dict of lists.

    Lines may also be joined with ``;``. Blank lines and ``#`` comments are
    skipped. Raises :class:`UsageError` naming the offending line.
    """
    settings = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for part in line.split(";"):
            part = part.strip()
            if not part:
                continue
            key, sep, value = part.partition("=")
            key = key.strip().lower()
            if not sep or not key:
                raise UsageError(f"line {lineno}: expected 'key = value', got {part!r}")
            if key not in CONFIG_KEYS:
                raise UsageError(f"line {lineno}: unknown key {key!r}")
            conv, is_axis = CONFIG_KEYS[key]
            items = _split_items(value)
            if not items:
                raise UsageError(f"line {lineno}: no value for {key!r}")
            if not is_axis and len(items) > 1:
                raise UsageError(f"line {lineno}: {key!r} takes a single value")
            try:
                settings[key] = [conv(item) for item in items]
            except ValueError:
                raise UsageError(f"line {lineno}: bad value for {key!r}: {value.strip()!r}")
    return settings


def _settings_from_flags(args):
    settings = {}
    for key, (conv, _) in CONFIG_KEYS.items():
        raw = getattr(args, key, None)
        if raw is None:
            continue
        try:
            settings[key] = [conv(item) for item in _split_items(str(raw))]
        except ValueError:
            raise UsageError(f"bad value for --{key.replace('_', '-')}: {raw!r}")
    return settings


def scenarios_from_settings(settings):
    for key in ("n", "p", "epsilon", "methods"):
        if key not in settings:
            raise UsageError(f"missing required setting {key!r}")
    try:
        methods = [Method(m) for m in settings["methods"]]
        mechanisms = [Mechanism(m) for m in settings.get("mechanism", ["laplace"])]
    except ValueError as exc:
        raise UsageError(str(exc))
    common = {}
    for key, field in (("runs", "runs"), ("draws", "draws"), ("burn_in", "burn_in"),
                       ("t", "T"), ("s", "S")):
        if key in settings:
            common[field] = settings[key][0]
    common["seed"] = _resolve_seed(settings["seed"][0] if "seed" in settings else None)
    return build_grid(methods, mechanisms, settings["n"], settings["p"], settings["epsilon"],
                      settings.get("alpha", [0.05]), **common)


def format_csv(results):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for res in results:
        sc, m = res.scenario, res.metrics
        writer.writerow([sc.method.value, sc.mechanism.value, sc.n, f"{sc.p_true:g}",
                         f"{sc.epsilon:g}", f"{sc.alpha:g}", sc.runs, sc.seed,
                         f"{m.coverage:.4f}", f"{m.avg_length:.4f}", f"{m.oob_rate:.4f}"])
    return buf.getvalue()


def cmd_simulate(args):
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 1
        settings = parse_config(text)
        settings.update(_settings_from_flags(args))
    else:
        settings = _settings_from_flags(args)
    scenarios = scenarios_from_settings(settings)
    for sc in scenarios:
        try:
            sc.validate()
        except (ConfigError, ValueError) as exc:
            raise UsageError(f"invalid scenario ({sc.method.value}, n={sc.n}, p={sc.p_true:g}, "
                             f"epsilon={sc.epsilon:g}): {exc}")
    out = settings.get("out", [None])[0]
    handle = None
    if out is not None:
        try:
            handle = open(out, "w", encoding="utf-8", newline="")
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return 1

    def progress(i, done, total):
        if args.progress:
            print(f"scenario {i + 1}/{len(scenarios)}: {done}/{total}", file=sys.stderr)

    results = run_grid(scenarios, threads=args.threads, progress=progress)
    failed = [r for r in results if r.error is not None]
    for r in failed:
        print(f"error: {r.scenario.method.value} n={r.scenario.n} p={r.scenario.p_true:g} "
              f"epsilon={r.scenario.epsilon:g}: {r.error}", file=sys.stderr)
    text = format_csv([r for r in results if r.error is None])
    if handle is None:
        sys.stdout.write(text)
    else:
        try:
            with handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return 1
    return 2 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="dpbinom",
                     description="Confidence intervals for differentially private proportions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("release", help="release a noisy proportion")
    p.add_argument("--k", type=int, required=True, help="success count")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--mechanism", choices=MECHANISMS, default="laplace")
    p.add_argument("--sigma2", type=float, default=None,
                   help="discrete Gaussian variance (default 1/(n*epsilon)^2)")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("estimate", help="interval estimate from a noisy proportion")
    p.add_argument("--method", choices=ESTIMATE_METHODS, required=True)
    p.add_argument("--phat-star", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--mechanism", choices=MECHANISMS, default="laplace")
    p.add_argument("--sigma2", type=float, default=None)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--draws", type=int, default=5000, help="retained Gibbs draws")
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--t", type=int, default=5000, help="two-step imputations")
    p.add_argument("--s", type=int, default=5000, help="exact-interval simulations")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--paper-literal-likelihood", action="store_true",
                   help="use the Laplace likelihood with scale n*epsilon")
    p.add_argument("--grid-exact", action="store_true",
                   help="scan a fixed candidate grid in the exact method")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="run a simulation grid and write CSV")
    p.add_argument("--config", default=None, help="file of 'key = value' lines")
    for key in CONFIG_KEYS:
        p.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: available CPUs)")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"dpbinom: error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, ArithmeticError) as exc:
        print(f"dpbinom: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
