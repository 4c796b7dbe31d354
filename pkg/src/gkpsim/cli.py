"""Command-line interface: verify, simulate, sweep, pdf, compare.

Exit codes: 0 success, 1 validation failure (bad flags/config), 2 runtime or
estimation failure.  Relative output paths are resolved against the
``GKPSIM_OUTPUT_DIR`` environment variable when it is set.

Sweep config grammar (INI, parsed with configparser; parse errors report the
offending line number)::

    [noise]
    k = 1.0                 ; exactly one of k / sigma_d
    ;sigma_d = 0.3

    [grid]
    sigma_a_start = 0.05
    sigma_a_stop  = 0.25
    sigma_a_count = 21      ; strictly increasing grid (count 1 = single point)

    [mc]
    n_samples = 1000000
    seed = 42               ; mandatory: byte-reproducibility contract
    chunk_size = 250000     ; optional, default 250000

    [schemes]
    s1 = original           ; one scheme per key, any key names
    s2 = me
    s3 = p_steane b=1.4142135623730951 m=1
    s4 = teleportation

    [output]
    path = sweep_k1.csv

Defaults table (flags override config, config overrides defaults):
n_samples 1000000, chunk_size 250000, pdf points 501, pdf range +-6 sqrt(pi),
KS alpha 1e-3, samplewise equivalence tolerance 1e-12.

Every CSV starts with a ``# schema_version=1`` comment line; numbers are
written with 17 significant digits so parsing them back is lossless.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytics import (
    PdfSpec,
    ks_critical_value,
    ks_statistic,
    p_steane_sym_pdf,
)
from .core import SQRT_PI, TWO_SQRT_PI, NoiseModel, RngStream, sample_shifts, symmetric_mod
from .montecarlo import McConfig, SweepRow, estimate_delta, run_sweep
from .schemes import SchemeKind, SchemeSpec, correct
from .symplectic import verify_preprocessing_identity

SCHEMA_VERSION = 1
CSV_HEADER = (
    "scheme,b,m,k,sigma_A,sigma_D,delta_q,delta_q_se,delta_p,delta_p_se,"
    "logical_rate,logical_rate_se,n_samples,seed"
)
DEFAULT_N_SAMPLES = 1_000_000
DEFAULT_CHUNK_SIZE = 250_000
DEFAULT_PDF_POINTS = 501
KS_ALPHA = 1e-3
SAMPLEWISE_TOL = 1e-12

OUTPUT_DIR_ENV = "GKPSIM_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _resolve_output(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def parse_scheme_string(text: str) -> SchemeSpec:
    """Parse 'original' | 'me' | 'teleportation' | 'p_steane b=<float> m=<int>'."""
    parts = text.strip().split()
    if not parts:
        raise ValueError("empty scheme string")
    kind = parts[0].lower()
    params: dict[str, str] = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise ValueError(f"malformed scheme parameter {tok!r} (expected key=value)")
        key, val = tok.split("=", 1)
        params[key.strip()] = val.strip()
    if kind in ("original", "original_steane"):
        spec = SchemeSpec.original()
    elif kind in ("me", "me_steane"):
        spec = SchemeSpec.me()
    elif kind in ("teleportation", "tele"):
        spec = SchemeSpec.teleportation()
    elif kind in ("p_steane", "psteane"):
        if set(params) != {"b", "m"}:
            raise ValueError("p_steane needs exactly the parameters b=<float> m=<int>")
        return SchemeSpec.p_steane(float(params["b"]), int(params["m"]))
    else:
        raise ValueError(f"unknown scheme kind {kind!r}")
    if params:
        raise ValueError(f"{kind} takes no parameters, got {sorted(params)}")
    return spec


@dataclass(frozen=True)
class RunConfig:
    """Validated sweep configuration."""

    specs: list[SchemeSpec]
    k: float | None
    sigma_D: float | None
    sigma_A_grid: list[float]
    mc: McConfig
    output: str

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))

        def need(section: str, key: str) -> str:
            if not parser.has_option(section, key):
                raise ValueError(f"missing [{section}] {key}")
            return parser.get(section, key)

        if not parser.has_section("noise"):
            raise ValueError("missing [noise] section")
        has_k = parser.has_option("noise", "k")
        has_sd = parser.has_option("noise", "sigma_d")
        if has_k == has_sd:
            raise ValueError("[noise] must set exactly one of k / sigma_d")
        k = parser.getfloat("noise", "k") if has_k else None
        sigma_d = parser.getfloat("noise", "sigma_d") if has_sd else None
        if k is not None and k < 1.0:
            raise ValueError("[noise] k must be >= 1")
        if sigma_d is not None and sigma_d <= 0.0:
            raise ValueError("[noise] sigma_d must be > 0")

        start = float(need("grid", "sigma_a_start"))
        stop = float(need("grid", "sigma_a_stop"))
        count = int(need("grid", "sigma_a_count"))
        if count < 1:
            raise ValueError("[grid] sigma_a_count must be >= 1")
        if count == 1:
            if start != stop:
                raise ValueError("[grid] single-point grid needs sigma_a_start == sigma_a_stop")
            grid = [start]
        else:
            if not start < stop:
                raise ValueError("[grid] sigma_a_start must be < sigma_a_stop")
            grid = list(np.linspace(start, stop, count))
        if any(s <= 0 for s in grid):
            raise ValueError("[grid] all sigma_A values must be > 0")

        if not parser.has_option("mc", "seed"):
            raise ValueError("missing [mc] seed (wall-clock seeding is not allowed)")
        mc = McConfig(
            n_samples=parser.getint("mc", "n_samples", fallback=DEFAULT_N_SAMPLES),
            seed=parser.getint("mc", "seed"),
            chunk_size=parser.getint("mc", "chunk_size", fallback=DEFAULT_CHUNK_SIZE),
        )

        if not parser.has_section("schemes") or not parser.options("schemes"):
            raise ValueError("missing or empty [schemes] section")
        specs = [parse_scheme_string(parser.get("schemes", key)) for key in parser.options("schemes")]

        output = need("output", "path")
        return cls(specs=specs, k=k, sigma_D=sigma_d, sigma_A_grid=grid, mc=mc, output=output)


def sweep_rows_to_csv(rows: list[SweepRow]) -> str:
    lines = [f"# schema_version={SCHEMA_VERSION}", CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r.scheme,
                    "" if r.b is None else _fmt(r.b),
                    "" if r.m is None else str(r.m),
                    _fmt(r.k),
                    _fmt(r.sigma_A),
                    _fmt(r.sigma_D),
                    _fmt(r.delta_q),
                    _fmt(r.delta_q_se),
                    _fmt(r.delta_p),
                    _fmt(r.delta_p_se),
                    _fmt(r.logical_rate),
                    _fmt(r.logical_rate_se),
                    str(r.n_samples),
                    str(r.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    report = verify_preprocessing_identity(args.a, args.b)
    print(f"preprocessing identity check: a={_fmt(args.a)} b={_fmt(args.b)}")
    print(f"m = 2a/b = {_fmt(report.m)} (integer: {'yes' if report.m_is_integer else 'no'})")
    print(f"symplectic defect of U2: {report.symplectic_defect:.3e}")
    print("stabilizer generators (coefficients of sqrt(pi)*(q+, p+, q0, p0)):")
    for i, (g, gt) in enumerate(
        zip(report.original.generators, report.transformed.generators), start=1
    ):
        orig = " ".join(_fmt(v) for v in g)
        trans = " ".join(_fmt(v) for v in gt)
        print(f"  S{i}: [{orig}] -> [{trans}]")
    print(f"IDENTITY: {'PASS' if report.identical else 'FAIL'}")
    return EXIT_OK if report.identical else EXIT_VALIDATION


def _noise_from_args(args) -> NoiseModel:
    has_k = args.k is not None
    has_sd = args.sigma_d is not None
    if has_k == has_sd:
        raise ValueError("set exactly one of --k / --sigma-d")
    if has_k:
        return NoiseModel.from_ratio(args.k, args.sigma_a)
    return NoiseModel(sigma_D=args.sigma_d, sigma_A=args.sigma_a)


def cmd_simulate(args) -> int:
    spec = parse_scheme_string(args.scheme)
    noise = _noise_from_args(args)
    cfg = McConfig(n_samples=args.n_samples, seed=args.seed, chunk_size=args.chunk_size)
    rows = run_sweep([spec], None, [noise.sigma_A], cfg, sigma_D=noise.sigma_D)
    text = sweep_rows_to_csv(rows)
    if args.output:
        path = _resolve_output(args.output)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = RunConfig.from_file(args.config)
    rows = run_sweep(
        config.specs,
        config.k,
        config.sigma_A_grid,
        config.mc,
        sigma_D=config.sigma_D,
        n_workers=args.workers,
    )
    path = _resolve_output(args.output or config.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(sweep_rows_to_csv(rows), encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def cmd_pdf(args) -> int:
    if args.points < 2:
        raise ValueError("--points must be >= 2")
    if not args.x_max > args.x_min:
        raise ValueError("--x-max must exceed --x-min")
    spec = PdfSpec(sigma_D=args.sigma_d, sigma_A=args.sigma_a)
    x = np.linspace(args.x_min, args.x_max, args.points)
    f = p_steane_sym_pdf(x, spec)

    hist = None
    if args.mc_overlay:
        if args.seed is None:
            raise ValueError("--mc-overlay requires --seed")
        gen = RngStream(args.seed).generator()
        noise = NoiseModel(sigma_D=args.sigma_d, sigma_A=args.sigma_a)
        shifts = sample_shifts(noise, gen, args.mc_overlay)
        out = correct(shifts, SchemeSpec.p_steane(np.sqrt(2.0), 1), noise)
        width = x[1] - x[0]
        edges = np.concatenate((x - width / 2.0, [x[-1] + width / 2.0]))
        hist = np.histogram(out.u_out, edges)[0] / (args.mc_overlay * width)

    lines = [f"# schema_version={SCHEMA_VERSION}"]
    lines.append("x,f" + (",mc_density" if hist is not None else ""))
    for i, (xi, fi) in enumerate(zip(x, f)):
        row = f"{_fmt(xi)},{_fmt(fi)}"
        if hist is not None:
            row += f",{_fmt(hist[i])}"
        lines.append(row)
    integral = float(np.trapezoid(f, x))
    lines.append(f"# trapezoid_integral={_fmt(integral)}")
    text = "\n".join(lines) + "\n"

    if args.output:
        path = _resolve_output(args.output)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args) -> int:
    spec_a = parse_scheme_string(args.scheme_a)
    spec_b = parse_scheme_string(args.scheme_b)
    noise = _noise_from_args(args)
    cfg = McConfig(n_samples=args.n_samples, seed=args.seed, chunk_size=args.chunk_size)

    # paired-seed Delta comparison (common random numbers)
    dq_a, dp_a = estimate_delta(spec_a, noise, cfg, stream_index=0)
    dq_b, dp_b = estimate_delta(spec_b, noise, cfg, stream_index=0)

    # samplewise diff on one matched chunk
    shifts = sample_shifts(noise, RngStream(cfg.seed, 0).generator(), min(cfg.n_samples, cfg.chunk_size))
    out_a = correct(shifts, spec_a, noise)
    out_b = correct(shifts, spec_b, noise)
    raw_diff = max(
        float(np.max(np.abs(out_a.u_out - out_b.u_out))),
        float(np.max(np.abs(out_a.v_out - out_b.v_out))),
    )
    mod_diff = max(
        float(
            np.max(
                np.abs(
                    symmetric_mod(out_a.u_out, TWO_SQRT_PI) - symmetric_mod(out_b.u_out, TWO_SQRT_PI)
                )
            )
        ),
        float(
            np.max(
                np.abs(
                    symmetric_mod(out_a.v_out, TWO_SQRT_PI) - symmetric_mod(out_b.v_out, TWO_SQRT_PI)
                )
            )
        ),
    )

    # KS on independent streams (the two-sample test needs independence)
    shifts_a = sample_shifts(noise, RngStream(cfg.seed, 1).generator(), cfg.n_samples)
    shifts_b = sample_shifts(noise, RngStream(cfg.seed, 2).generator(), cfg.n_samples)
    ka = correct(shifts_a, spec_a, noise)
    kb = correct(shifts_b, spec_b, noise)
    ks_q = ks_statistic(
        np.sort(symmetric_mod(ka.u_out, TWO_SQRT_PI)), np.sort(symmetric_mod(kb.u_out, TWO_SQRT_PI))
    )
    ks_p = ks_statistic(
        np.sort(symmetric_mod(ka.v_out, TWO_SQRT_PI)), np.sort(symmetric_mod(kb.v_out, TWO_SQRT_PI))
    )
    crit = ks_critical_value(cfg.n_samples, cfg.n_samples, KS_ALPHA)

    samplewise = raw_diff < SAMPLEWISE_TOL or mod_diff < SAMPLEWISE_TOL
    distributional = ks_q < crit and ks_p < crit
    verdict = samplewise or distributional

    print(f"compare: {spec_a.label} vs {spec_b.label}")
    print(f"noise: sigma_D={_fmt(noise.sigma_D)} sigma_A={_fmt(noise.sigma_A)}")
    print(f"delta_q: {_fmt(dq_a.mean)}+-{_fmt(dq_a.std_error)} vs {_fmt(dq_b.mean)}+-{_fmt(dq_b.std_error)}")
    print(f"delta_p: {_fmt(dp_a.mean)}+-{_fmt(dp_a.std_error)} vs {_fmt(dp_b.mean)}+-{_fmt(dp_b.std_error)}")
    print(f"max_samplewise_diff: raw={raw_diff:.3e} mod_2sqrtpi={mod_diff:.3e}")
    print(f"ks: q={ks_q:.6f} p={ks_p:.6f} critical(alpha={KS_ALPHA})={crit:.6f}")
    print(f"EQUIVALENT: {'PASS' if verdict else 'FAIL'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkpsim",
        description="Simulate and analyze GKP shift-error correction schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the preprocessing stabilizer identity")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simulate", help="single-point estimates for one scheme")
    p.add_argument("--scheme", required=True, help="e.g. 'me' or 'p_steane b=1.41 m=1'")
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--sigma-d", type=float, default=None)
    p.add_argument("--sigma-a", type=float, required=True)
    p.add_argument("--n-samples", type=int, default=DEFAULT_N_SAMPLES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default=None, help="override the config output path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("pdf", help="tabulate the symmetric-case output density")
    p.add_argument("--sigma-d", type=float, required=True)
    p.add_argument("--sigma-a", type=float, required=True)
    p.add_argument("--x-min", type=float, default=-6.0 * SQRT_PI)
    p.add_argument("--x-max", type=float, default=6.0 * SQRT_PI)
    p.add_argument("--points", type=int, default=DEFAULT_PDF_POINTS)
    p.add_argument("--mc-overlay", type=int, default=0, help="sample count for histogram columns")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_pdf)

    p = sub.add_parser("compare", help="paired and distributional scheme comparison")
    p.add_argument("--scheme-a", required=True)
    p.add_argument("--scheme-b", required=True)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--sigma-d", type=float, default=None)
    p.add_argument("--sigma-a", type=float, required=True)
    p.add_argument("--n-samples", type=int, default=DEFAULT_N_SAMPLES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.set_defaults(fn=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, configparser.Error, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # estimation / runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
