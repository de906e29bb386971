"""Command-line front end.

Every subcommand builds one or more verification reports, writes them as JSON
(default) or CSV, and exits with 0 when every check passes, 1 when a bound is
violated and 2 on a usage or configuration error.

JSON output is deterministic for a given command line and seed except for the
fields listed in ``NONDETERMINISTIC_FIELDS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import convexbody, density, entropy, logconcave
from .mathcore import DomainError, RngStream
from .report import SCHEMA_VERSION, VerificationReport, jsonable

log = logging.getLogger("anticonc")

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 10**6
NONDETERMINISTIC_FIELDS = ("wall_time",)
EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

# stream ids keep the random inputs of different checks independent
STREAM_COEFFS, STREAM_FLOOR, STREAM_RADIAL, STREAM_KR = 1, 2, 3, 4
STREAM_CONE, STREAM_CUBE, STREAM_ENTROPY = 5, 6, 7


class UsageError(Exception):
    pass


def artifact_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    dim: int | None = None
    coeffs: str | None = None
    output: str | None = None
    format: str = "json"
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.samples < 2:
            raise UsageError("--samples must be at least 2")
        if self.dim is not None and self.dim < 1:
            raise UsageError("--dim must be a positive integer")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")


@dataclass
class Outcome:
    reports: list[VerificationReport]
    table: list[dict] | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


# ------------------------------------------------------------------ helpers


def parse_range(text: str, kind=float) -> list:
    """``lo:hi`` (integers, inclusive) or ``lo:hi:step`` (floats, hi included
    when it lands on the grid up to rounding)."""
    parts = text.split(":")
    try:
        if len(parts) == 2 and kind is int:
            lo, hi = int(parts[0]), int(parts[1])
            if hi < lo:
                raise ValueError("empty range")
            return list(range(lo, hi + 1))
        if len(parts) == 3:
            lo, hi, step = (float(p) for p in parts)
            if step <= 0 or hi < lo:
                raise ValueError("need step > 0 and hi >= lo")
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [lo + i * step for i in range(n)]
    except ValueError as exc:
        raise UsageError(f"malformed range {text!r}: {exc}") from exc
    raise UsageError(f"malformed range {text!r}")


def parse_p(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError as exc:
        raise UsageError(f"malformed p {text!r}") from exc
    if not p > 1:
        raise UsageError("p must exceed 1")
    return p


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    if v is None:
        return ""
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(jsonable(v), sort_keys=True)
    return str(v)


def to_csv(outcome: Outcome) -> str:
    buf = io.StringIO()
    if outcome.table:
        cols = list(outcome.table[0].keys())
        rows = [[_fmt(r.get(c)) for c in cols] for r in outcome.table]
    else:
        cols = ["report", "name", "value", "stderr", "bound", "pass"]
        rows = [[rep.name, c.name, _fmt(c.value), _fmt(c.stderr), _fmt(c.bound), _fmt(c.passed)]
                for rep in outcome.reports for c in rep.checks]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    w.writerows(rows)
    return buf.getvalue()


def to_json(config: RunConfig, outcome: Outcome, wall: float) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": artifact_version(),
        "command": config.command,
        "config": asdict(config),
        "pass": outcome.passed,
        "reports": [r.to_dict() for r in outcome.reports],
        "wall_time": wall,
    }
    if outcome.table is not None:
        doc["table"] = outcome.table
    return json.dumps(jsonable(doc), indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------- commands


def cmd_density(cfg: RunConfig) -> Outcome:
    d = cfg.dim or 1
    try:
        coeffs = density.parse_coeffs(cfg.coeffs or "equal:5", RngStream(cfg.seed, STREAM_COEFFS))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    floor = density.verify_density_floor(coeffs, d, n_samples=cfg.samples,
                                         rng=RngStream(cfg.seed, STREAM_FLOOR), threads=cfg.threads)
    radii = np.array([0.2, 0.4, 0.6, 0.8]) * min(1.0, coeffs.l1)
    radial = density.verify_radial_identity(coeffs, d, radii, n_samples=cfg.samples,
                                            rng=RngStream(cfg.seed, STREAM_RADIAL),
                                            threads=cfg.threads)
    kr = density.verify_kr_lower(coeffs, d, cfg.samples, RngStream(cfg.seed, STREAM_KR),
                                 threads=cfg.threads)
    return Outcome([floor, radial, kr])


def _extremal_min_report(res) -> VerificationReport:
    rep = VerificationReport("extremal_min", constants={"target": logconcave.EXTREMAL_VALUE})
    gap = abs(res.value - logconcave.EXTREMAL_VALUE)
    rep.add("min sigma f(sigma sqrt3)", res.value, logconcave.EXTREMAL_VALUE, gap <= 1e-4,
            a=res.a, b=res.b, kind=res.kind)
    rep.add("a*", res.a, 1e-3, res.a <= 1e-3)
    rep.add("b* is infinite", res.b, math.inf, math.isinf(res.b))
    return rep


def cmd_extremal(cfg: RunConfig) -> Outcome:
    action = cfg.extra.get("action", "min")
    if action == "min":
        return Outcome([_extremal_min_report(logconcave.minimize_phi0())])
    if action == "curve":
        grid = parse_range(cfg.extra.get("t0_grid") or "0:1.7320508:0.1")
        if any(not 0 <= t <= logconcave.SQRT3 + 1e-12 for t in grid):
            raise UsageError("t0 values must lie in [0, sqrt 3]")
        curve = logconcave.min_density_curve(grid)
        rep = VerificationReport("min_density_curve", config={"t0_grid": grid})
        vals = np.array([c.value for c in curve])
        inc = float(np.diff(vals).max()) if len(vals) > 1 else 0.0
        rep.add("max forward difference", inc, 0.0, inc <= 1e-12)
        table = [{"t0": c.t0, "min_value": c.value, "a_star": c.a, "b_star": c.b, "kind": c.kind}
                 for c in curve]
        return Outcome([rep], table)
    if action == "claims":
        reps = [logconcave.verify_b_dominates_a()]
        reps += [logconcave.verify_h_monotone_in_b(a) for a in (0.01, 0.1, 1.0, 10.0)]
        reps.append(logconcave.verify_h_limit_nonnegative())
        return Outcome(reps)
    raise UsageError(f"unknown extremal action {action!r}")


def cmd_cone(cfg: RunConfig) -> Outcome:
    if cfg.extra.get("sweep"):
        d_values = parse_range(cfg.extra["sweep"], int)
    else:
        d_values = [cfg.extra.get("d") or cfg.dim or 3]
    if d_values[0] < 1:
        raise UsageError("cone dimensions must be positive")
    reps = [convexbody.verify_isotropy(), convexbody.verify_sharpness(d_values)]
    for d in d_values:
        if d <= convexbody.REJECTION_MAX_DIM:
            reps.append(convexbody.verify_cone_mc(d, cfg.samples, RngStream(cfg.seed, STREAM_CONE, (d,))))
    table = convexbody.sharpness_sweep(d_values)
    for row in table:
        row.pop("beyond_apex")
    return Outcome(reps, table)


def cmd_cube(cfg: RunConfig) -> Outcome:
    d = cfg.dim or 3
    if not 2 <= d <= density.ORACLE_MAX_TERMS:
        raise UsageError(f"cube needs 2 <= --dim <= {density.ORACLE_MAX_TERMS}")
    n_dir = int(cfg.extra.get("directions") or 100)
    return Outcome([convexbody.verify_cube_sections(d, n_dir, RngStream(cfg.seed, STREAM_CUBE, (d,)))])


def builtin_instances(d: int) -> list[entropy.SumInstance]:
    """Exact instances: point masses, and for d = 1 uniform and mixed sums."""
    out = [entropy.SumInstance.normalized([entropy.PointMass(d)] * 3, [1, 1, 1], d, "point-masses")]
    if d == 1:
        u = entropy.UniformBall(1, 1.0)
        out.append(entropy.SumInstance.normalized([u, u], [1, 1], 1, "two-uniforms"))
        out.append(entropy.SumInstance.normalized(
            [entropy.PointMass(1, [0.3]), u, entropy.UniformBall(1, 0.5, [1.0])], [1, 2, 3], 1,
            "mixed"))
    return out


def _load_instance(path: str) -> entropy.SumInstance:
    try:
        with open(path) as fh:
            return entropy.SumInstance.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, DomainError) as exc:
        raise UsageError(f"cannot load instance {path!r}: {exc}") from exc


def cmd_entropy(cfg: RunConfig) -> Outcome:
    action = cfg.extra.get("action", "constants")
    d = cfg.dim or 1
    p = parse_p(cfg.extra.get("p") or "inf")
    if action == "constants":
        rep = VerificationReport("entropy_constants", config={"p": p, "d": d})
        const = entropy.smoothing_constant(p, d)
        rep.constants.update({"repi_c": entropy.repi_constant(p, d),
                              "repi_c_dimension_free": entropy.repi_constant(p),
                              "C_pd": const.bound, "C_pd_exact": const.exact,
                              "kappa_d": entropy.kappa_d(d)})
        rep.add("C_pd exact < bound", const.exact, const.bound, const.exact < const.bound)
        rep.add("kappa_d >= 1/12", rep.constants["kappa_d"], 1 / 12, rep.constants["kappa_d"] >= 1 / 12)
        return Outcome([rep])
    if cfg.extra.get("instance"):
        instances = [_load_instance(cfg.extra["instance"])]
    else:
        instances = builtin_instances(d)
    reps = []
    for k, inst in enumerate(instances):
        if action == "check-renyi":
            reps.append(entropy.verify_smoothed_sum_entropy(inst, p))
        elif action == "check-concentration":
            lam = float(cfg.extra.get("lam") or 1.0)
            if lam < 1.0:
                raise UsageError("--lambda must be at least 1")
            n = min(cfg.samples, 200_000)
            reps.append(entropy.verify_concentration_bound(
                inst, lam, n, RngStream(cfg.seed, STREAM_ENTROPY, (k,))))
        else:
            raise UsageError(f"unknown entropy action {action!r}")
    return Outcome(reps)


def cmd_report_merge(cfg: RunConfig) -> Outcome:
    merged = []
    for path in cfg.extra.get("inputs") or []:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read report {path!r}: {exc}") from exc
        for r in doc.get("reports", []):
            rep = VerificationReport(r.get("name", "?"), r.get("config", {}),
                                     constants=r.get("constants", {}), notes=r.get("notes", []))
            for c in r.get("checks", []):
                rep.add(c["name"], c.get("value"), c.get("bound"), c.get("pass", False),
                        c.get("stderr"), source=path)
            merged.append(rep)
    if not merged:
        raise UsageError("report-merge needs at least one input report")
    return Outcome(merged)


COMMANDS = {
    "density": cmd_density,
    "extremal": cmd_extremal,
    "cone": cmd_cone,
    "cube": cmd_cube,
    "entropy": cmd_entropy,
    "report-merge": cmd_report_merge,
}


# ------------------------------------------------------------------- parser


def _seed_default() -> int:
    env = os.environ.get("ACL_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ACL_SEED must be an integer, got {env!r}") from None


def build_parser(seed_default: int = DEFAULT_SEED) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=seed_default,
                        help="root seed (default 42, or $ACL_SEED)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--dim", type=int)
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads; results do not depend on it")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="anticonc",
                                     description="Anti-concentration verification campaigns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", parents=[common], help="density lower bounds for sums")
    p.add_argument("--coeffs", default="equal:5", help="equal:n, random:n or a comma list")

    p = sub.add_parser("extremal", parents=[common], help="extremal log-concave family")
    p.add_argument("action", nargs="?", default="min", choices=("min", "curve", "claims"))
    p.add_argument("--t0-grid", dest="t0_grid", help="lo:hi:step (default 0:1.7320508:0.1)")

    p = sub.add_parser("cone", parents=[common], help="isotropic double cone")
    p.add_argument("--d", type=int, help="single dimension")
    p.add_argument("--sweep", help="dmin:dmax")

    p = sub.add_parser("cube", parents=[common], help="sections of the unit cube")
    p.add_argument("--directions", type=int, default=100)

    p = sub.add_parser("entropy", parents=[common], help="Rényi entropy checks")
    p.add_argument("action", choices=("check-renyi", "check-concentration", "constants"))
    p.add_argument("--p", default="inf", help="order p > 1 or inf")
    p.add_argument("--d", type=int, dest="d_entropy", help="alias for --dim")
    p.add_argument("--instance", help="JSON file with a sum instance")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)

    p = sub.add_parser("report-merge", parents=[common], help="merge JSON reports")
    p.add_argument("inputs", nargs="+")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "seed", "samples", "dim", "coeffs", "output", "format", "threads",
            "verbose", "d_entropy"}
    extra = {k: v for k, v in vars(args).items() if k not in skip}
    dim = args.dim
    if getattr(args, "d_entropy", None) is not None:
        dim = args.d_entropy
    cfg = RunConfig(args.command, args.seed, args.samples, dim, getattr(args, "coeffs", None),
                    args.output, args.format, args.threads, extra)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    try:
        parser = build_parser(_seed_default())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        cfg = config_from_args(args)
        outcome = COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    wall = time.perf_counter() - start
    text = to_csv(outcome) if cfg.format == "csv" else to_json(cfg, outcome, wall)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for rep in outcome.reports:
        for c in rep.failures():
            log.warning("%s: %s = %r violates bound %r", rep.name, c.name, c.value, c.bound)
    return EXIT_PASS if outcome.passed else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
