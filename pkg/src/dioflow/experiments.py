"""Config-driven batch experiments with reproducible seeds and JSON reports.

Every runner takes a plain config dict (the parsed JSON) and returns a report
dict matching report_schema.json: a fixed envelope around per-sample records,
a summary recomputable from those records, and a caveats block.  All numeric
evidence is finite-range; the caveats say so explicitly.  Reports are
deterministic given config and seed, except for the two timing fields.

Per-sample work is fanned out over a process pool when jobs > 1; results are
merged in sample order, so the worker count never changes the report.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import time
from datetime import datetime, timezone
from fractions import Fraction

from . import rng
from .cf import (
    PrecisionError,
    RationalInterval,
    contains_pattern,
    expand_interval,
    tail_max,
)
from .lattice import (
    cassels_scan,
    dirichlet_min,
    littlewood_scan,
    systole_below,
    systole_trace,
    trace_to_csv,
)
from .sampler import make_sampler, sample_product
from .surd import QuadraticSurd
from .surface import verify_gauss_factor

SCHEMA_VERSION = "1"
PACKAGE_VERSION = "0.1.0"

# Abort threshold: runs tolerate sporadic precision exhaustion, but beyond
# this fraction of samples the configuration is considered broken.
FAILURE_BUDGET = Fraction(1, 10)

# Boshernitzan precision rule: requiring width(x) * n_max^2 < 2^(-K * depth)
# with K = 4 leaves a factor-of-margin over the ~2.4 bits a typical continued
# fraction digit consumes, so ~depth digits certify for every multiplier.
BOSHERNITZAN_K = 4

# Expected certified digits per base-3 digit of bracket width, from the
# typical growth rate of convergent denominators.  Used only as an up-front
# sanity check on requested depths.
CF_DIGITS_PER_TERNARY_DIGIT = 0.46


class ConfigError(ValueError):
    """The experiment configuration is missing, malformed, or inconsistent."""


class PrecisionBudgetError(RuntimeError):
    """Too many samples exhausted their precision; the run is aborted."""


# -- plumbing -----------------------------------------------------------------


def _require(config: dict, key: str):
    if key not in config:
        raise ConfigError(f"missing config key {key!r}")
    return config[key]


def _positive_int(config: dict, key: str, default=None) -> int:
    value = config.get(key, default)
    if value is None:
        raise ConfigError(f"missing config key {key!r}")
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"config key {key!r} must be a positive integer")
    return value


def _nonneg_int(config: dict, key: str, default=None) -> int:
    value = config.get(key, default)
    if value is None:
        raise ConfigError(f"missing config key {key!r}")
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(f"config key {key!r} must be a nonnegative integer")
    return value


def _seed(config: dict) -> int:
    value = _require(config, "seed")
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError("seed must be an integer")
    return value


def _cfg_fraction(value) -> Fraction:
    """Exact rational from JSON: int, "p/q" or decimal string, or [p, q].

    Bare floats are converted through their shortest decimal form, so 0.05
    means 1/20, not its binary approximation.
    """
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not numbers")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(str(value))
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return Fraction(int(value[0]), int(value[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot read {value!r} as a rational: {exc}") from exc
    raise ConfigError(f"cannot read {value!r} as a rational")


def _pmap(worker, tasks, jobs: int):
    jobs = max(1, int(jobs))
    if jobs == 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with multiprocessing.Pool(jobs) as pool:
        return pool.map(worker, tasks)


def _envelope(experiment, config, seed, started, samples, summary, caveats):
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": experiment,
        "package_version": PACKAGE_VERSION,
        "config": config,
        "seed": seed,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "wall_clock_seconds": round(time.monotonic() - started, 6),
        "samples": samples,
        "summary": summary,
        "caveats": caveats,
    }


def _check_budget(failed: int, total: int, what: str):
    if total and Fraction(failed, total) > FAILURE_BUDGET:
        raise PrecisionBudgetError(
            f"{failed} of {total} {what} exhausted their precision "
            f"(budget {float(FAILURE_BUDGET):.0%})"
        )


# -- cantor-patterns ----------------------------------------------------------


def _pattern_key(pattern) -> str:
    return ",".join(str(d) for d in pattern)


def _cantor_worker(task):
    index, sample_seed, sampler_spec, digits, depth, patterns = task
    interval = make_sampler(sampler_spec)(digits, sample_seed)
    cf = expand_interval(interval, depth)
    record = {
        "index": index,
        "sample_seed": sample_seed,
        "certified": cf.certified,
        "skipped": cf.certified < depth,
        "patterns": {},
    }
    if not record["skipped"]:
        record["patterns"] = {
            _pattern_key(p): contains_pattern(cf, p) for p in patterns
        }
    return record


def summarize_cantor_patterns(samples, patterns) -> dict:
    counted = [s for s in samples if not s["skipped"]]
    fractions = {}
    contained = {}
    for pattern in patterns:
        key = _pattern_key(pattern)
        hits = sum(1 for s in counted if s["patterns"].get(key) is not None)
        contained[key] = hits
        fractions[key] = (hits / len(counted)) if counted else None
    return {
        "samples": len(samples),
        "skipped": sum(1 for s in samples if s["skipped"]),
        "counted": len(counted),
        "contained": contained,
        "fractions": fractions,
    }


def run_cantor_patterns(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    seed = _seed(config)
    count = _nonneg_int(config, "samples")
    digits = _positive_int(config, "digits")
    depth = _positive_int(config, "depth")
    patterns = _require(config, "patterns")
    if not isinstance(patterns, list) or not patterns:
        raise ConfigError("patterns must be a nonempty list")
    for pattern in patterns:
        if not isinstance(pattern, list) or not pattern:
            raise ConfigError("each pattern must be a nonempty list of digits")
        if any(not isinstance(d, int) or d < 1 for d in pattern):
            raise ConfigError("pattern digits must be integers >= 1")
    if CF_DIGITS_PER_TERNARY_DIGIT * digits < depth:
        raise ConfigError(
            f"digit budget {digits} cannot certify depth {depth}: expect about "
            f"{CF_DIGITS_PER_TERNARY_DIGIT} certified terms per ternary digit"
        )
    sampler_spec = config.get("sampler", {"kind": "cantor"})
    tasks = [
        (i, rng.derive(seed, i), sampler_spec, digits, depth, patterns)
        for i in range(count)
    ]
    samples = _pmap(_cantor_worker, tasks, jobs)
    summary = summarize_cantor_patterns(samples, patterns)
    caveats = [
        f"containment fractions over {count} samples at digit depth {digits} are "
        "statistical evidence, not a proof of the almost-everywhere statement",
        f"samples whose certified expansion is shorter than {depth} terms are "
        "skipped and counted in the summary",
    ]
    if summary["counted"] == 0:
        caveats.append("no samples were counted; fractions are undefined")
    return _envelope(
        "cantor-patterns", config, seed, started, samples, summary, caveats
    )


# -- boshernitzan -------------------------------------------------------------


def _parse_x(spec, default_bits=256) -> RationalInterval:
    if not isinstance(spec, dict):
        raise ConfigError("x must be an object")
    kind = spec.get("kind")
    if kind == "surd":
        try:
            surd = QuadraticSurd(
                int(spec["a"]), int(spec["b"]), int(spec["c"]), int(spec["d"])
            )
        except (KeyError, ValueError, ZeroDivisionError, TypeError) as exc:
            raise ConfigError(f"bad surd spec: {exc}") from exc
        if surd.is_rational:
            raise ConfigError("x is rational: its expansion terminates")
        bits = _positive_int(spec, "bits", default_bits)
        return surd.enclosure(bits)
    if kind == "interval":
        lo = _cfg_fraction(_require(spec, "lo"))
        hi = _cfg_fraction(_require(spec, "hi"))
        if not lo < hi:
            raise ConfigError(
                "interval x must have positive width (a point is rational)"
            )
        return RationalInterval(lo, hi)
    raise ConfigError(f"unknown x kind {kind!r}")


def _multipliers(config, n_max: int):
    spec = config.get("multipliers", {"kind": "squares"})
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "squares":
        return [(n, n * n) for n in range(1, n_max + 1)]
    if kind == "prime_powers":
        p = _positive_int(spec, "p", 2)
        max_exp = _positive_int(spec, "max_exp", 12)
        return [(exp, p**exp) for exp in range(1, max_exp + 1)]
    raise ConfigError(f"unknown multiplier kind {kind!r}")


def _bosh_worker(task):
    label, mult, lo, hi, depth, burn_in = task
    scaled = RationalInterval(lo * mult, hi * mult)
    record = {"n": label, "multiplier": mult, "failed": False}
    floor_lo = math.floor(scaled.lo)
    if floor_lo != math.floor(scaled.hi):
        record.update(failed=True, certified=0, tail_max=None)
        return record
    cf = expand_interval(scaled - floor_lo, depth)
    record["certified"] = cf.certified
    if cf.certified < depth:
        record.update(failed=True, tail_max=None)
        return record
    record["tail_max"] = tail_max(cf, burn_in)
    return record


def summarize_boshernitzan(samples) -> dict:
    records = []
    best = None
    for rec in samples:
        if rec["failed"]:
            continue
        if best is None or rec["tail_max"] > best:
            best = rec["tail_max"]
            records.append(
                {"n": rec["n"], "multiplier": rec["multiplier"], "tail_max": best}
            )
    failed = sum(1 for rec in samples if rec["failed"])
    return {
        "evaluated": len(samples) - failed,
        "failed": failed,
        "records": records,
        "record_count": len(records),
        "final_record": best,
    }


def run_boshernitzan(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    x = _parse_x(_require(config, "x"))
    n_max = _positive_int(config, "n_max")
    depth = _positive_int(config, "depth")
    burn_in = _nonneg_int(config, "burn_in", 0)
    mults = _multipliers(config, n_max)
    largest = max(m for _, m in mults)
    # Hard precision rule, checked before any work is done.
    if x.width * largest >= Fraction(1, 2 ** (BOSHERNITZAN_K * depth)):
        raise ConfigError(
            f"precision rule violated: width(x) * {largest} must stay below "
            f"2^-{BOSHERNITZAN_K * depth} (K = {BOSHERNITZAN_K} bits per term)"
        )
    tasks = [(label, m, x.lo, x.hi, depth, burn_in) for label, m in mults]
    samples = _pmap(_bosh_worker, tasks, jobs)
    _check_budget(sum(1 for r in samples if r["failed"]), len(samples), "multipliers")
    summary = summarize_boshernitzan(samples)
    caveats = [
        f"record growth over {len(mults)} multipliers is finite-range evidence "
        "for unbounded tail maxima, not a proof",
        f"tail maxima ignore the first {burn_in} terms and read at most "
        f"{depth} certified terms per multiplier",
    ]
    return _envelope(
        "boshernitzan", config, config.get("seed"), started, samples, summary, caveats
    )


# -- di-census ----------------------------------------------------------------


def _dyadic_grid(n_max: int):
    grid = []
    n = 1
    while n <= n_max:
        grid.append(n)
        n *= 2
    return grid


def _record_rows(records):
    return [
        {
            "bound": r.bound,
            "value": float(r.value),
            "exact": str(r.value),
            "witness": list(r.witness),
        }
        for r in records
    ]


def _di_worker(task):
    index, vx, vy, grid, gamma, scan_h, lw_n_max = task
    v = (vx, vy)
    nus = []
    sup_nu = Fraction(0)
    nu_min = None
    for n_grid in grid:
        nu = dirichlet_min(v, n_grid)
        nus.append({"N": n_grid, "value": float(nu), "exact": str(nu)})
        sup_nu = max(sup_nu, nu)
        nu_min = nu if nu_min is None else min(nu_min, nu)
    cassels = cassels_scan(v, "simultaneous", gamma, scan_h)
    lw = littlewood_scan(vx, vy, lw_n_max)
    return {
        "index": index,
        "v": [str(vx), str(vy)],
        "nu": nus,
        "sup_nu": float(sup_nu),
        "sup_nu_exact": str(sup_nu),
        "nu_min": float(nu_min) if nu_min is not None else None,
        "all_nu_le_1": sup_nu <= 1,
        "sup_above_0_9": sup_nu > Fraction(9, 10),
        "cassels_records": _record_rows(cassels),
        "littlewood_records": _record_rows(lw),
    }


def summarize_di_census(samples) -> dict:
    sups = [s["sup_nu"] for s in samples]
    return {
        "points": len(samples),
        "all_nu_le_1": all(s["all_nu_le_1"] for s in samples),
        "sup_nu_min": min(sups) if sups else None,
        "sup_nu_mean": (sum(sups) / len(sups)) if sups else None,
        "sup_nu_max": max(sups) if sups else None,
        "count_sup_above_0_9": sum(1 for s in samples if s["sup_above_0_9"]),
        "nu_hits_zero": sum(1 for s in samples if s["nu_min"] == 0.0),
    }


def _census_points(config, seed):
    points_spec = _require(config, "points")
    if not isinstance(points_spec, dict):
        raise ConfigError("points must be an object")
    if "list" in points_spec:
        pts = []
        for row in points_spec["list"]:
            if not isinstance(row, (list, tuple)) or len(row) != 2:
                raise ConfigError("each explicit point must be a pair")
            pts.append((_cfg_fraction(row[0]), _cfg_fraction(row[1])))
        return pts, None
    if "product" in points_spec:
        specs = points_spec["product"]
        if not isinstance(specs, (list, tuple)) or len(specs) != 2:
            raise ConfigError("product source needs exactly two sampler specs")
        if seed is None:
            raise ConfigError("sampled points require a seed")
        count = _nonneg_int(points_spec, "count")
        digits = _positive_int(points_spec, "digits")
        pts = []
        for i in range(count):
            ix, iy = sample_product(specs[0], specs[1], digits, rng.derive(seed, i))
            # Left endpoints of the digit cylinders: genuine points of the
            # sampled sets, approximating the drawn reals to 1/base^digits.
            pts.append((ix.lo, iy.lo))
        return pts, digits
    raise ConfigError("points must contain 'list' or 'product'")


def run_di_census(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    seed = config.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("seed must be an integer")
    n_max = _positive_int(config, "n_max")
    points, digits = _census_points(config, seed)
    grid = _dyadic_grid(n_max)
    gamma_cfg = config.get("gamma", [0, 0])
    if not isinstance(gamma_cfg, (list, tuple)) or len(gamma_cfg) != 2:
        raise ConfigError("gamma must be a pair")
    gamma = (_cfg_fraction(gamma_cfg[0]), _cfg_fraction(gamma_cfg[1]))
    scan_h = _positive_int(config, "cassels_h", n_max)
    lw_n_max = _positive_int(config, "littlewood_n_max", n_max)
    tasks = [
        (i, vx, vy, grid, gamma, scan_h, lw_n_max)
        for i, (vx, vy) in enumerate(points)
    ]
    samples = _pmap(_di_worker, tasks, jobs)
    summary = summarize_di_census(samples)
    caveats = [
        f"dyadic grid stops at N = {grid[-1] if grid else 0}; near-1 values of "
        "sup nu(N) are evidence against Dirichlet improvability, not a verdict",
        "scan records are strict running minima over a finite search range",
    ]
    if digits is not None:
        caveats.append(
            f"sampled points are left endpoints of depth-{digits} digit "
            "cylinders of the target measure"
        )
    return _envelope("di-census", config, seed, started, samples, summary, caveats)


# -- escape-mass --------------------------------------------------------------


def _eps_grid(config):
    spec = _require(config, "eps")
    if isinstance(spec, dict) and "values" in spec:
        values = [_cfg_fraction(v) for v in spec["values"]]
    elif isinstance(spec, dict):
        start = _cfg_fraction(_require(spec, "start"))
        factor = _cfg_fraction(_require(spec, "factor"))
        count = _positive_int(spec, "count")
        values = []
        cur = start
        for _ in range(count):
            values.append(cur)
            cur = cur * factor
    else:
        values = [_cfg_fraction(spec)]
    if any(v < 0 for v in values):
        raise ConfigError("thresholds must be nonnegative")
    return values


def _escape_points(config, seed):
    spec = _require(config, "source")
    if not isinstance(spec, dict):
        raise ConfigError("source must be an object")
    if "list" in spec:
        pts = []
        for row in spec["list"]:
            if isinstance(row, (list, tuple)) and len(row) == 2 and all(
                isinstance(x, int) for x in row
            ):
                pts.append((Fraction(row[0], row[1]),))
            elif isinstance(row, (list, tuple)):
                pts.append(tuple(_cfg_fraction(x) for x in row))
            else:
                pts.append((_cfg_fraction(row),))
        for p in pts:
            if len(p) not in (1, 2):
                raise ConfigError("flow points must have 1 or 2 coordinates")
        return pts, None
    if "sampler" in spec:
        if seed is None:
            raise ConfigError("sampled points require a seed")
        count = _nonneg_int(spec, "count")
        digits = _positive_int(spec, "digits")
        sampler = make_sampler(spec["sampler"])
        pts = [
            (sampler(digits, rng.derive(seed, i)).lo,) for i in range(count)
        ]
        return pts, digits
    raise ConfigError("source must contain 'list' or 'sampler'")


def _escape_worker(task):
    index, v, horizon, dt, eps_values, norm_kind, bits = task
    try:
        trace = systole_trace(v, Fraction(0), horizon, dt, norm_kind, bits)
        fractions = {}
        for eps in eps_values:
            below = 0
            for point in trace.points:
                if point.systole.hi < eps:
                    below += 1
                elif point.systole.lo >= eps:
                    continue
                elif systole_below(v, point.t, eps, norm_kind, bits):
                    below += 1
            frac = Fraction(below, len(trace.points))
            fractions[str(eps)] = {"fraction": float(frac), "exact": str(frac)}
    except PrecisionError as exc:
        return {
            "index": index,
            "v": [str(x) for x in v],
            "failed": True,
            "error": str(exc),
            "fractions": {},
        }
    return {
        "index": index,
        "v": [str(x) for x in v],
        "failed": False,
        "fractions": fractions,
    }


def summarize_escape_mass(samples, eps_values=None) -> dict:
    if eps_values is None:
        keys = sorted({k for s in samples for k in s["fractions"]}, key=Fraction)
    else:
        keys = [str(e) for e in eps_values]
    means = {}
    for key in keys:
        vals = [
            s["fractions"][key]["fraction"]
            for s in samples
            if key in s["fractions"]
        ]
        means[key] = (sum(vals) / len(vals)) if vals else None
    return {
        "points": len(samples),
        "failed": sum(1 for s in samples if s.get("failed")),
        "mean_fraction": means,
    }


def run_escape_mass(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    seed = config.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("seed must be an integer")
    horizon = _cfg_fraction(_require(config, "T"))
    dt = _cfg_fraction(config.get("dt", 1))
    if horizon < 0 or dt <= 0:
        raise ConfigError("T must be nonnegative and dt positive")
    eps_values = _eps_grid(config)
    norm_kind = config.get("norm", "sup")
    bits = _positive_int(config, "bits", 128)
    points, digits = _escape_points(config, seed)
    tasks = [
        (i, v, horizon, dt, eps_values, norm_kind, bits)
        for i, v in enumerate(points)
    ]
    samples = _pmap(_escape_worker, tasks, jobs)
    _check_budget(
        sum(1 for s in samples if s.get("failed")), len(samples), "flow points"
    )
    summary = summarize_escape_mass(samples, eps_values)
    caveats = [
        f"time fractions below each threshold over the finite horizon T = "
        f"{horizon}; escape of mass is an asymptotic notion",
    ]
    if digits is not None:
        caveats.append(
            f"sampled points are left endpoints of depth-{digits} digit "
            "cylinders of the target measure"
        )
    return _envelope("escape-mass", config, seed, started, samples, summary, caveats)


# -- gauss-check --------------------------------------------------------------


_NONSQUARES = [
    2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20,
    21, 22, 23, 24, 26, 27, 28, 29, 30, 31, 32, 33, 34, 35,
]


def _random_surd(seed: int) -> QuadraticSurd:
    d = _NONSQUARES[rng.digit(rng.word(seed, 0), len(_NONSQUARES))]
    a = rng.digit(rng.word(seed, 1), 19) - 9
    b = 1 + rng.digit(rng.word(seed, 2), 9)
    c = 1 + rng.digit(rng.word(seed, 3), 9)
    return QuadraticSurd(a, b, c, d).frac()


def _gauss_worker(task):
    index, sample_seed, explicit, bits, k = task
    if explicit is not None:
        surd = QuadraticSurd(*explicit).frac()
    else:
        surd = _random_surd(sample_seed)
    record = {
        "index": index,
        "surd": [surd.a, surd.b, surd.c, surd.d],
        "failed": False,
    }
    try:
        residuals = verify_gauss_factor(surd.enclosure(bits), k)
    except (PrecisionError, ValueError) as exc:
        # ValueError covers enclosures too wide to stay inside (0,1).
        record.update(failed=True, error=str(exc), max_residual=None)
        return record
    record["max_residual"] = float(max(residuals)) if residuals else 0.0
    return record


def summarize_gauss_check(samples) -> dict:
    ok = [s for s in samples if not s["failed"]]
    residuals = [s["max_residual"] for s in ok]
    return {
        "points": len(samples),
        "failed": len(samples) - len(ok),
        "max_residual": max(residuals) if residuals else None,
    }


def run_gauss_check(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    k = _nonneg_int(config, "k")
    bits = _positive_int(config, "bits", 256)
    explicit = config.get("points")
    if explicit is not None:
        tasks = []
        for i, spec in enumerate(explicit):
            if not isinstance(spec, dict) or "surd" not in spec:
                raise ConfigError("each explicit point must be {'surd': [a,b,c,d]}")
            params = spec["surd"]
            try:
                surd = QuadraticSurd(*[int(x) for x in params])
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad surd spec: {exc}") from exc
            if surd.is_rational:
                raise ConfigError("rational starting point rejected")
            tasks.append((i, None, tuple(int(x) for x in params), bits, k))
        seed = config.get("seed")
    else:
        seed = _seed(config)
        count = _nonneg_int(config, "samples")
        tasks = [(i, rng.derive(seed, i), None, bits, k) for i in range(count)]
    samples = _pmap(_gauss_worker, tasks, jobs)
    _check_budget(sum(1 for s in samples if s["failed"]), len(samples), "orbits")
    summary = summarize_gauss_check(samples)
    caveats = [
        f"residuals compare {k} certified returns against exact shift iterates "
        "of the bracket midpoint; enclosure width grows along the orbit",
    ]
    return _envelope("gauss-check", config, seed, started, samples, summary, caveats)


# -- systole trace export -----------------------------------------------------


def run_systole(config: dict, jobs: int = 1, out_dir=None) -> dict:
    started = time.monotonic()
    v_cfg = _require(config, "v")
    if not isinstance(v_cfg, (list, tuple)) or not 1 <= len(v_cfg) <= 2:
        raise ConfigError("v must be a list of 1 or 2 rationals")
    v = tuple(_cfg_fraction(x) for x in v_cfg)
    t0 = _cfg_fraction(config.get("t0", 0))
    t1 = _cfg_fraction(_require(config, "t1"))
    dt = _cfg_fraction(config.get("dt", "1/4"))
    if dt <= 0 or t1 < t0:
        raise ConfigError("need dt > 0 and t1 >= t0")
    norm_kind = config.get("norm", "sup")
    bits = _positive_int(config, "bits", 128)
    try:
        trace = systole_trace(v, t0, t1, dt, norm_kind, bits)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    samples = [
        {
            "t": float(p.t),
            "systole_lo": float(p.systole.lo),
            "systole_hi": float(p.systole.hi),
            "exact_lo": str(p.systole.lo),
            "exact_hi": str(p.systole.hi),
            "coeffs": list(p.coeffs),
        }
        for p in trace.points
    ]
    floor_lo = min(p.systole.lo for p in trace.points)
    summary = {
        "grid_points": len(samples),
        "floor_lo": float(floor_lo),
        "floor_lo_exact": str(floor_lo),
        "min_hi": min(s["systole_hi"] for s in samples),
        "dips": [
            {"coeffs": list(d.coeffs), "t_star": d.t_star, "depth": d.depth}
            for d in trace.dips
        ],
    }
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        trace_to_csv(trace, os.path.join(out_dir, "trace.csv"))
    caveats = [
        "grid evaluation only: the systole between grid points is bounded by "
        "the listed dip records, not evaluated",
    ]
    return _envelope(
        "systole", config, config.get("seed"), started, samples, summary, caveats
    )


RUNNERS = {
    "cantor-patterns": run_cantor_patterns,
    "boshernitzan": run_boshernitzan,
    "di-census": run_di_census,
    "escape-mass": run_escape_mass,
    "gauss-check": run_gauss_check,
    "systole": run_systole,
}
