"""Batch command line front end.

Subcommands: discretize-check, recover, rate-sweep, lebesgue-test, dump-index-set.
Exit codes: 0 all expectations met, 1 an expectation failed, 2 usage/config error.
"""
import argparse
import math
import sys

import numpy as np

from . import __schema_version__
from .classes import PROFILES, ClassParamsA, ClassParamsW, generate_A, generate_W
from .discretization import UdCapExceeded, draw_points, m_budget, verify_ud
from .greedy import DictionaryOnPoints, OracleCapExceeded, best_v_term_discrete, womp
from .index_sets import parse_index_set
from .io import CsvAppender, coef_fn_from_csv, coef_fn_to_csv, read_config
from .rates import fit_rate, log_exponent, rate_exponent
from .recovery import REPORT_COLUMNS, RecoveryConfig, empirical_rho, recover
from .trig import PointSet

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

UD_COLUMNS = ("schema_version", "m", "u", "mode", "trials", "worst_lower", "worst_upper", "pass",
              "seed")
LEBESGUE_COLUMNS = ("schema_version", "instance", "t", "v", "womp_err", "sigma_v", "ratio")


class ConfigError(ValueError):
    pass


class Config:
    """Typed access to a flat key=value mapping."""

    def __init__(self, raw):
        self.raw = dict(raw)

    def get(self, key, cast=str, default=None, required=False):
        if key not in self.raw or self.raw[key] == "":
            if required:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return cast(self.raw[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {self.raw[key]!r} ({exc})") from None

    def ints(self, key, default=None, required=False):
        return self.get(key, lambda s: [int(x) for x in s.split(",") if x.strip()], default,
                        required)

    def floats(self, key, default=None, required=False):
        return self.get(key, lambda s: [float(x) for x in s.split(",") if x.strip()], default,
                        required)


def parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _close_out(fh):
    if fh is not sys.stdout:
        fh.close()


def _seed(cfg, args):
    return args.seed if args.seed is not None else cfg.get("seed", int, 0)


# ---------------------------------------------------------------------------


def cmd_discretize_check(cfg, args):
    d = cfg.get("d", int, 1)
    dictionary = parse_index_set(cfg.get("dictionary", required=True), d)
    u_values = cfg.ints("u", required=True)
    points = cfg.get("points", str, "random")
    mode = cfg.get("mode", str, "sampled")
    trials = cfg.get("trials", int, 500)
    n_seeds = cfg.get("seeds", int, 1)
    c_lo = cfg.get("c_lo", float, 0.5)
    c_hi = cfg.get("c_hi", float, 1.5)
    min_rate = cfg.get("min_pass_rate", float, 1.0)
    base = _seed(cfg, args)
    if points not in ("random", "grid"):
        raise ConfigError("points must be random or grid")
    if mode not in ("sampled", "exhaustive"):
        raise ConfigError("mode must be sampled or exhaustive")

    out = _open_out(args.out)
    app = CsvAppender(out, UD_COLUMNS)
    ok = True
    try:
        for u in u_values:
            if points == "grid":
                G = cfg.get("grid", int, required=True)
                sets = [(G ** d, [PointSet.equispaced(G, d)])]
            else:
                ms = cfg.ints("m")
                if ms is None:
                    rule = cfg.get("m_rule", str, "log3")
                    ms = [m_budget(u, rule, cfg.get("c_user", float, 1.0))]
                sets = [(m, [draw_points(m, d, seed=base + i) for i in range(n_seeds)])
                        for m in ms]
            for m, xis in sets:
                passed = 0
                for i, xi in enumerate(xis):
                    try:
                        rep = verify_ud(xi, dictionary, u, mode=mode, trials=trials,
                                        seed=base + i, c_lo=c_lo, c_hi=c_hi)
                    except UdCapExceeded as exc:
                        raise ConfigError(str(exc)) from None
                    passed += rep.passed
                    row = rep.csv_row()
                    row["schema_version"] = __schema_version__
                    row["seed"] = base + i if points == "random" else ""
                    app.append(row)
                rate = passed / len(xis)
                print(f"u={u} m={m}: {passed}/{len(xis)} pass", file=sys.stderr)
                ok &= rate >= min_rate
    finally:
        _close_out(out)
    return EXIT_OK if ok else EXIT_FAIL


def _class_params(cfg):
    kind = cfg.get("class", str, "W").upper()
    beta = cfg.get("beta", float, 1.0)
    try:
        if kind == "W":
            return ClassParamsW(cfg.get("a", float, required=True), cfg.get("b", float, 0.0), beta)
        if kind == "A":
            return ClassParamsA(cfg.get("r", float, required=True), beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError("class must be W or A")


def _recovery_config(cfg, seed, v=None):
    d = cfg.get("d", int, 1)
    dict_spec = cfg.get("dictionary")
    try:
        return RecoveryConfig(
            d=d, p=cfg.get("p", float, 2.0), v=v if v is not None else cfg.get("v", int, 1),
            m_rule=cfg.get("m_rule", str, "log3"), m=cfg.get("m", int),
            c_user=cfg.get("c_user", float, 2.0), t=cfg.get("t", float, 1.0),
            algorithm=cfg.get("algorithm", str, "womp"),
            dictionary=parse_index_set(dict_spec, d) if dict_spec else None,
            seed=seed, c_iter=cfg.get("c_iter", float, 2.0),
            verify=cfg.get("verify", parse_bool, True), ud_trials=cfg.get("ud_trials", int, 200),
            redraws=cfg.get("redraws", int, 10), select=cfg.get("select", str, "max"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_recover(cfg, args):
    seed = _seed(cfg, args)
    rc = _recovery_config(cfg, seed)
    params = _class_params(cfg)
    f_csv = cfg.get("f_csv")
    if f_csv:
        with open(f_csv) as fh:
            f = coef_fn_from_csv(fh.read())
    else:
        gen = generate_W if isinstance(params, ClassParamsW) else generate_A
        profile = cfg.get("profile", str, "saturating")
        if profile not in PROFILES:
            raise ConfigError(f"profile must be one of {PROFILES}")
        f = gen(params, rc.d, cfg.get("j_max", int), seed=seed, profile=profile)
    try:
        approx, report = recover(f, rc, class_params=params)
    except OracleCapExceeded as exc:
        raise ConfigError(str(exc)) from None
    beta = repr(float(params.beta))
    a = repr(float(params.a if isinstance(params, ClassParamsW) else params.r))
    b = repr(float(params.b)) if isinstance(params, ClassParamsW) else ""
    out = _open_out(args.out)
    try:
        CsvAppender(out, REPORT_COLUMNS).append(report.csv_row(beta, a, b))
    finally:
        _close_out(out)
    approx_out = cfg.get("approx_out")
    if approx_out:
        with open(approx_out, "w") as fh:
            fh.write(coef_fn_to_csv(approx))
    return EXIT_OK


def cmd_rate_sweep(cfg, args):
    seed = _seed(cfg, args)
    params = _class_params(cfg)
    v_values = cfg.ints("v", [4, 8, 16, 32, 64])
    rc = _recovery_config(cfg, seed, v=v_values[0])
    strip = args.strip_log if args.strip_log is not None else cfg.get("strip_log", parse_bool, False)
    profile = cfg.get("profile", str, "saturating")
    if profile not in PROFILES:
        raise ConfigError(f"profile must be one of {PROFILES}")
    try:
        rows = empirical_rho(params, rc, v_values, trials=cfg.get("trials", int, 1), seed=seed,
                             profile=profile, j_max=cfg.get("j_max", int))
    except OracleCapExceeded as exc:
        raise ConfigError(str(exc)) from None
    out = _open_out(args.out)
    try:
        CsvAppender(out, REPORT_COLUMNS).extend(rows)
    finally:
        _close_out(out)

    is_w = isinstance(params, ClassParamsW)
    strip_exp = log_exponent(rc.d, params.a, params.b) if (strip and is_w) else None
    pts = [(int(r["v"]), float(r["err_lp"])) for r in rows]
    try:
        fit = fit_rate(pts, strip=strip_exp)
    except ValueError as exc:
        print(f"rate fit failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    expect = cfg.get("expect_slope", float)
    if expect is None and is_w:
        expect = rate_exponent(rc.p, params.beta, params.a)
    tol = cfg.get("slope_tol", float, 0.25)
    print(f"slope={fit.slope:.4f} intercept={fit.intercept:.4f} r2={fit.r_squared:.4f} "
          f"stripped={fit.log_correction_stripped} expected={expect} tol={tol}", file=sys.stderr)
    if expect is not None and abs(fit.slope - expect) > tol:
        return EXIT_FAIL
    return EXIT_OK


def lebesgue_instances(n_dict, G, instances, seed):
    """Random f0 samples on the G-point grid: decaying random coefficients on the
    dictionary columns plus a small component outside their span."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(instances):
        decay = 1.0 / (1.0 + rng.permutation(n_dict))
        c = (rng.standard_normal(n_dict) + 1j * rng.standard_normal(n_dict)) * decay
        noise = rng.standard_normal(G) + 1j * rng.standard_normal(G)
        out.append((c, 0.05 * noise))
    return out


def cmd_lebesgue_test(cfg, args):
    seed = _seed(cfg, args)
    N = cfg.get("N", int, 10)
    v_values = cfg.ints("v", [1, 2, 3])
    t_values = cfg.floats("t", [0.5, 1.0])
    c_iter = cfg.get("c", int, 2)
    C = cfg.get("C", float, 5.0)
    instances = cfg.get("instances", int, 50)
    select = cfg.get("select", str, "first")
    d = 1
    dictionary = parse_index_set(cfg.get("dictionary", str, f"range:0,{N - 1}"), d)
    G = cfg.get("grid", int, 2 * N)
    xi = PointSet.equispaced(G, d)
    D = DictionaryOnPoints.build(dictionary, xi)
    out = _open_out(args.out)
    app = CsvAppender(out, LEBESGUE_COLUMNS)
    worst = 0.0
    try:
        for i, (c, noise) in enumerate(lebesgue_instances(D.N, G, instances, seed)):
            f0 = D.values @ c + noise
            for v in v_values:
                try:
                    sigma = best_v_term_discrete(f0, D, v).error
                except OracleCapExceeded as exc:
                    raise ConfigError(str(exc)) from None
                for t in t_values:
                    K = min(c_iter * v, D.N, D.m)
                    err = womp(f0, D, t=t, iterations=K, select=select, seed=seed + i)
                    e = err.residual_norms[-1]
                    scale = max(float(np.sqrt(np.mean(np.abs(f0) ** 2))), 1e-300)
                    if sigma <= 1e-12 * scale:
                        ratio = 0.0 if e <= 1e-10 * scale else math.inf
                    else:
                        ratio = e / sigma
                    worst = max(worst, ratio)
                    app.append({"schema_version": __schema_version__, "instance": i,
                                "t": repr(float(t)), "v": v, "womp_err": repr(float(e)),
                                "sigma_v": repr(float(sigma)), "ratio": repr(float(ratio))})
    finally:
        _close_out(out)
    print(f"max ratio {worst:.6g} (bound C={C})", file=sys.stderr)
    return EXIT_OK if worst <= C else EXIT_FAIL


def cmd_dump_index_set(cfg, args):
    d = args.d if args.d is not None else cfg.get("d", int, 1)
    spec = args.index_set or cfg.get("dictionary", required=True)
    try:
        J = parse_index_set(spec, d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = _open_out(args.out)
    try:
        out.write(J.to_text())
    finally:
        _close_out(out)
    return EXIT_OK


COMMANDS = {
    "discretize-check": cmd_discretize_check,
    "recover": cmd_recover,
    "rate-sweep": cmd_rate_sweep,
    "lebesgue-test": cmd_lebesgue_test,
    "dump-index-set": cmd_dump_index_set,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="sampling-recovery", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--strip-log", type=parse_bool, default=None,
                       help="divide errors by the log correction before fitting")
        if name == "dump-index-set":
            p.add_argument("--index-set", help="e.g. cross:4, cube:8, layer:3, block:2,1")
            p.add_argument("--d", type=int)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        raw = read_config(args.config) if args.config else {}
        return COMMANDS[args.command](Config(raw), args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed config lines or invalid parameters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
