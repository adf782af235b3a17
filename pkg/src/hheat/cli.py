"""Command-line front end: TOML config parsing, experiment orchestration,
CSV emission with exact round-trip formatting, and a self-test that runs
the acceptance-criteria suite."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import convergence_lab, covariance_engine, field_simulator
from .covariance_engine import CovarianceQuery, empirical_covariance
from .errors import ConfigError, HHeatError
from .field_simulator import (
    EquationSpec,
    SpectralGrid,
    draw_noise,
    kernel_averaged_field,
    limit_even_field,
    limit_odd_smoothed_field,
    rescaled_field,
    solution_field,
)
from .spectral_model import (
    SingularityComponent,
    SpectrumSpec,
    covariance_r,
    spectral_density_f,
)

FIELD_KINDS = ("limit", "solution", "rescaled", "kernel_averaged")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _threads() -> int:
    raw = os.environ.get("HHEAT_THREADS", "")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"HHEAT_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise ConfigError("HHEAT_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _ordered_map(fn, items):
    """Map preserving input order; thread count capped by HHEAT_THREADS."""
    items = list(items)
    n = min(_threads(), len(items)) or 1
    if n == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# --- configuration ---------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    spectrum: SpectrumSpec
    equation: EquationSpec
    grid: SpectralGrid
    replicates: int
    seed: int
    t_grid: tuple[float, ...]
    x_grid: tuple[float, ...]
    field_kind: str = "limit"
    eps: float = 1.0
    sweep_mode: str = "temporal"
    sweep_ms: tuple[int, ...] = ()
    sweep_values: tuple[float, ...] = ()
    sweep_dx: float = 1.5
    sweep_fixed: float = 5.0
    sweep_t_base: float = 0.5
    eps_ladder: tuple[float, ...] = convergence_lab.DEFAULT_LADDER
    residual_t: float = 1.0
    residual_regime: str | None = None
    out_dir: Path = field(default_factory=lambda: Path("."))


def _require(table: dict, section: str, key: str):
    if key not in table:
        raise ConfigError(f"[{section}] is missing required key {key!r}")
    return table[key]


def _float_list(table, section, key, default=None):
    if default is not None and key not in table:
        return tuple(float(v) for v in default)
    vals = _require(table, section, key)
    if not isinstance(vals, list) or not vals:
        raise ConfigError(f"[{section}] {key} must be a non-empty array")
    return tuple(float(v) for v in vals)


def parse_config(path: Path, seed_override: int | None = None,
                 out_override: Path | None = None) -> RunConfig:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}")

    for section in ("spectrum", "equation", "grid", "mc"):
        if section not in doc:
            raise ConfigError(f"{path}: missing [{section}] section")

    sp = doc["spectrum"]
    weights = _float_list(sp, "spectrum", "weights")
    kappas = _float_list(sp, "spectrum", "kappas")
    omegas = _float_list(sp, "spectrum", "omegas")
    if not len(weights) == len(kappas) == len(omegas):
        raise ConfigError(
            "[spectrum] weights, kappas, omegas must have equal lengths"
        )
    total = math.fsum(weights)
    if abs(total - 1.0) > 1e-12:
        raise ConfigError(
            f"[spectrum] weights must sum to 1 (weight-sum invariant); got {total!r}"
        )
    try:
        spectrum = SpectrumSpec(
            tuple(
                SingularityComponent(a, k, w)
                for a, k, w in zip(weights, kappas, omegas)
            )
        )
    except HHeatError as exc:
        raise ConfigError(f"[spectrum] invalid: {exc}")

    eqt = doc["equation"]
    m = _require(eqt, "equation", "m")
    if not isinstance(m, int) or m < 2:
        raise ConfigError(f"[equation] m must be an integer >= 2, got {m!r}")
    mu = eqt.get("mu")
    if mu is not None and mu not in (1, -1):
        raise ConfigError(f"[equation] mu must be 1 or -1, got {mu!r}")
    try:
        equation = EquationSpec(m, mu)
    except HHeatError as exc:
        raise ConfigError(f"[equation] invalid: {exc}")
    fkind = eqt.get("field", "limit")
    if fkind not in FIELD_KINDS:
        raise ConfigError(f"[equation] field must be one of {FIELD_KINDS}, got {fkind!r}")
    eps = float(eqt.get("eps", 1.0))
    if not 0.0 < eps <= 1.0:
        raise ConfigError(f"[equation] eps must lie in (0, 1], got {eps!r}")

    gr = doc["grid"]
    try:
        grid = SpectralGrid(float(_require(gr, "grid", "delta")),
                            int(_require(gr, "grid", "N")))
    except HHeatError as exc:
        raise ConfigError(f"[grid] invalid: {exc}")
    t_grid = _float_list(gr, "grid", "t_grid")
    x_grid = _float_list(gr, "grid", "x_grid")
    if any(t <= 0 for t in t_grid):
        raise ConfigError("[grid] t_grid values must be positive")

    mc = doc["mc"]
    replicates = _require(mc, "mc", "replicates")
    if not isinstance(replicates, int) or replicates < 0:
        raise ConfigError(f"[mc] replicates must be a nonnegative integer, got {replicates!r}")
    seed = _require(mc, "mc", "seed")
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"[mc] seed must be a nonnegative integer, got {seed!r}")
    if seed_override is not None:
        seed = seed_override

    sw = doc.get("sweep", {})
    mode = sw.get("mode", "temporal")
    if mode not in ("temporal", "spatial"):
        raise ConfigError(f"[sweep] mode must be temporal or spatial, got {mode!r}")
    ms = tuple(sw.get("ms", [m]))
    for mm in ms:
        if not isinstance(mm, int) or mm < 2 or mm % 2 != m % 2:
            raise ConfigError(
                f"[sweep] ms must be integers >= 2 of the same parity as m, got {ms!r}"
            )
    values = _float_list(sw, "sweep", "values", default=np.linspace(0.2, 10.0, 50))
    ladder = _float_list(sw, "sweep", "eps_ladder",
                         default=convergence_lab.DEFAULT_LADDER)
    regime = sw.get("regime")
    if regime is not None and regime not in convergence_lab.REGIMES:
        raise ConfigError(
            f"[sweep] regime must be one of {convergence_lab.REGIMES}, got {regime!r}"
        )

    return RunConfig(
        spectrum=spectrum,
        equation=equation,
        grid=grid,
        replicates=replicates,
        seed=seed,
        t_grid=t_grid,
        x_grid=x_grid,
        field_kind=fkind,
        eps=eps,
        sweep_mode=mode,
        sweep_ms=ms,
        sweep_values=values,
        sweep_dx=float(sw.get("dx", 1.5)),
        sweep_fixed=float(sw.get("fixed", 5.0)),
        sweep_t_base=float(sw.get("t_base", 0.5)),
        eps_ladder=ladder,
        residual_t=float(sw.get("residual_t", 1.0)),
        residual_regime=regime,
        out_dir=out_override if out_override is not None else Path("."),
    )


def bundled_config(name: str) -> Path:
    p = Path(__file__).parent / "configs" / f"{name}.toml"
    if not p.exists():
        raise ConfigError(f"no bundled config named {name!r}")
    return p


# --- output plumbing -------------------------------------------------------


def fmt17(v: float) -> str:
    """17 significant digits: float64 round-trips exactly."""
    return format(float(v), ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            fmt17(v) if isinstance(v, float) else str(v) for v in row
        ))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, command: str, config_path: Path | None,
                   seed: int | None, outputs: list[Path]) -> Path:
    manifest = {
        "command": command,
        "config": str(config_path) if config_path else None,
        "config_sha256": _sha256(config_path) if config_path else None,
        "seed": seed,
        "code_version": metadata.version("hheat"),
        "numpy_version": np.__version__,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# --- commands --------------------------------------------------------------


def _build_field(cfg: RunConfig) -> field_simulator.SpectralField:
    spec, eq, grid = cfg.spectrum, cfg.equation, cfg.grid
    if cfg.field_kind == "solution":
        return solution_field(spec, eq, grid)
    if cfg.field_kind == "rescaled":
        return rescaled_field(spec, eq, grid, cfg.eps)
    if cfg.field_kind == "kernel_averaged":
        return kernel_averaged_field(spec, eq, grid, cfg.eps)
    if eq.parity == "even":
        return limit_even_field(spec, eq, grid)
    return limit_odd_smoothed_field(spec, eq, grid)


def cmd_simulate(cfg: RunConfig, config_path: Path | None = None) -> list[Path]:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    fld = _build_field(cfg)
    reps = max(cfg.replicates, 1)
    values = fld.realize_ensemble(cfg.t_grid, cfg.x_grid, cfg.seed, reps)
    rows = []
    for r in range(reps):
        for i, t in enumerate(cfg.t_grid):
            for j, x in enumerate(cfg.x_grid):
                rows.append((float(t), float(x), float(values[r, i, j]), r))
    csv_path = out / "field.csv"
    write_csv(csv_path, ["t", "x", "value", "replicate"], rows)
    write_manifest(out, "simulate", config_path, cfg.seed, [csv_path])
    return [csv_path]


def _sweep_queries(cfg: RunConfig, m: int) -> list[CovarianceQuery]:
    queries = []
    odd = m % 2 == 1
    if cfg.sweep_mode == "temporal":
        # fixed spatial separation; vary t+t' (even) or t-t' (odd)
        for v in cfg.sweep_values:
            if odd:
                t0 = cfg.sweep_t_base
                queries.append(CovarianceQuery(t0 + v, t0, cfg.sweep_dx, 0.0))
            else:
                queries.append(CovarianceQuery(v / 2.0, v / 2.0, cfg.sweep_dx, 0.0))
    else:
        # fixed time coordinates; vary x-x'
        if odd:
            t, tp = cfg.sweep_t_base + cfg.sweep_fixed, cfg.sweep_t_base
        else:
            t = tp = cfg.sweep_fixed / 2.0
        for v in cfg.sweep_values:
            queries.append(CovarianceQuery(t, tp, v, 0.0))
    return queries


def _theory_cov(cfg: RunConfig, m: int, q: CovarianceQuery) -> float:
    if m % 2 == 0:
        return covariance_engine.cov_limit_even(cfg.spectrum, m, q)
    eq = EquationSpec(m, cfg.equation.mu)
    return covariance_engine.cov_limit_odd_smoothed(cfg.spectrum, eq, q)


def cmd_covariance(cfg: RunConfig, config_path: Path | None = None) -> list[Path]:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(m, q) for m in cfg.sweep_ms for q in _sweep_queries(cfg, m)]
    vals = _ordered_map(lambda jq: _theory_cov(cfg, jq[0], jq[1]), jobs)
    rows = [
        (m, q.t, q.t_prime, q.x, q.x_prime, v)
        for (m, q), v in zip(jobs, vals)
    ]
    theory_path = out / "cov_theory.csv"
    write_csv(theory_path, ["m", "t", "tprime", "x", "xprime", "value"], rows)
    outputs = [theory_path]

    if cfg.replicates >= 2:
        emp_rows = []
        for m in cfg.sweep_ms:
            eq = EquationSpec(m, cfg.equation.mu)
            if m % 2 == 0:
                fld = limit_even_field(cfg.spectrum, eq, cfg.grid)
            else:
                fld = limit_odd_smoothed_field(cfg.spectrum, eq, cfg.grid)
            queries = _sweep_queries(cfg, m)
            tg = sorted({q.t for q in queries} | {q.t_prime for q in queries})
            xg = sorted({q.x for q in queries} | {q.x_prime for q in queries})
            values = fld.realize_ensemble(tg, xg, cfg.seed, cfg.replicates)
            for q in queries:
                est = empirical_covariance(values, q, tg, xg)
                emp_rows.append((m, q.t, q.t_prime, q.x, q.x_prime,
                                 est.estimate, est.standard_error))
        emp_path = out / "cov_empirical.csv"
        write_csv(emp_path,
                  ["m", "t", "tprime", "x", "xprime", "value", "stderr"],
                  emp_rows)
        outputs.append(emp_path)

    write_manifest(out, "covariance", config_path, cfg.seed, outputs)
    return outputs


def cmd_residual(cfg: RunConfig, config_path: Path | None = None) -> list[Path]:
    from .errors import RegimeMismatch

    out = cfg.out_dir
    actual = convergence_lab.regime_of(cfg.spectrum, cfg.equation)
    if cfg.residual_regime is not None and cfg.residual_regime != actual:
        raise RegimeMismatch(
            f"config requests regime {cfg.residual_regime!r} but the spectrum "
            f"and equation give {actual!r} (zero-frequency weight "
            f"{cfg.spectrum.a0}, m={cfg.equation.m})"
        )
    out.mkdir(parents=True, exist_ok=True)
    pairs = _ordered_map(
        lambda eps: convergence_lab.residual(
            cfg.spectrum, cfg.equation, cfg.residual_t, eps
        ),
        cfg.eps_ladder,
    )
    rows = [(eps, v, e) for eps, (v, e) in zip(cfg.eps_ladder, pairs)]
    path = out / "residual.csv"
    write_csv(path, ["eps", "residual", "quad_error"], rows)
    write_manifest(out, "residual", config_path, cfg.seed, [path])
    return [path]


def cmd_figures_data(cfg: RunConfig, config_path: Path | None = None) -> list[Path]:
    """Emit the CSV bundle the figure renderer consumes: covariance/density
    line data, one field realization, the m-sweep curves, and a residual
    ladder."""
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    outputs = []

    # covariance r(x) and spectral density f(lambda) line panels
    xs = np.linspace(0.0, 30.0, 601)
    # offset dodges the density singularities at 0 and +-w_j
    lams = np.linspace(0.0, 6.0, 601) + 7.0e-4
    rows = [
        (float(x), covariance_r(cfg.spectrum, float(x)),
         float(l), spectral_density_f(cfg.spectrum, float(l)))
        for x, l in zip(xs, lams)
    ]
    dens_path = out / "cov_density.csv"
    write_csv(dens_path, ["x", "r", "lam", "f"], rows)
    outputs.append(dens_path)

    one_rep = RunConfig(**{**cfg.__dict__, "replicates": 1})
    outputs += cmd_simulate(one_rep, config_path)
    theory_only = RunConfig(**{**cfg.__dict__, "replicates": 0})
    outputs += cmd_covariance(theory_only, config_path)
    outputs += cmd_residual(cfg, config_path)

    write_manifest(out, "figures-data", config_path, cfg.seed, outputs)
    return outputs


# --- self-test: the acceptance criteria ------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.detail}; {self.seconds:.1f}s)"


def _timed(number, name, fn) -> CriterionResult:
    start = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(number, name, passed, detail,
                           time.perf_counter() - start)


def criterion_1_bessel_theta() -> CriterionResult:
    from .spectral_model import bessel_theta_identity_residual

    def run():
        worst = 0.0
        for kappa in np.linspace(0.1, 0.9, 9):
            for lam in np.linspace(0.1, 10.0, 9):
                worst = max(worst,
                            bessel_theta_identity_residual(float(kappa), float(lam)))
        return worst <= 1e-9, f"max relative residual {worst:.2e} (tol 1e-9)"

    return _timed(1, "Bessel/theta identity on a 9x9 (kappa, lambda) grid", run)


def criterion_2_fourier_pair() -> CriterionResult:
    from .numerics import integrate_finite
    from .spectral_model import example1_spectrum, spectral_density_f_vec

    def run():
        spec = example1_spectrum()
        marks = spec.density_marks()
        worst = 0.0
        for x in (0.0, 0.5, 1.0, 2.0, 5.0):
            def f(lam, _x=x):
                return 2.0 * math.cos(lam * _x) * float(
                    spectral_density_f_vec(spec, np.array([lam]))[0]
                )

            val = integrate_finite(f, 0.0, 80.0, marks, 1e-8).value
            worst = max(worst, abs(val - covariance_r(spec, x)))
        return worst <= 1e-4, f"max |FT(f) - r| {worst:.2e} (tol 1e-4)"

    return _timed(2, "Fourier pair: transformed density matches covariance", run)


def criterion_3_m2_reduction() -> CriterionResult:
    from .spectral_model import c2, example2_spectrum, theta_kappa

    def run():
        spec = example2_spectrum()
        const = convergence_lab.limit_constant_a0zero(spec)
        worst = 0.0
        for t in np.linspace(0.3, 2.0, 5):
            for dx in np.linspace(0.0, 3.0, 5):
                q = CovarianceQuery(float(t), float(t), float(dx), 0.0)
                got = covariance_engine.cov_limit_even_A0zero(spec, 2, q)
                s = q.dt_sum
                want = const * math.sqrt(math.pi) * math.exp(
                    -dx * dx / (4.0 * s)
                ) / math.sqrt(s)
                worst = max(worst, abs(got - want))
        return worst <= 1e-10, f"max |cov - Gaussian kernel form| {worst:.2e} (tol 1e-10)"

    return _timed(3, "m=2 covariance reduces to the Gaussian heat kernel", run)


def criterion_4_dual_path() -> CriterionResult:
    from .spectral_model import example1_spectrum, example2_spectrum

    def run():
        rng = np.random.default_rng(41)
        worst = 0.0
        for spec, op in (
            (example2_spectrum(), covariance_engine.cov_limit_even_A0zero),
            (example1_spectrum(), covariance_engine.cov_limit_even_A0nonzero),
        ):
            for m in (2, 4, 6):
                for _ in range(25):
                    t, tp = rng.uniform(0.2, 2.0, 2)
                    dx = rng.uniform(0.0, 4.0)
                    q = CovarianceQuery(float(t), float(tp), float(dx), 0.0)
                    a = op(spec, m, q)
                    b = op(spec, m, q, force_quadrature=True)
                    worst = max(worst, abs(a - b))
        return worst <= 1e-6, f"max |series - quadrature| {worst:.2e} (tol 1e-6)"

    return _timed(4, "Fox-Wright series agrees with direct quadrature", run)


def _mc_regime(spec, eq, grid, builder, cov_fn, seed) -> tuple[int, int]:
    rng = np.random.default_rng(seed)
    tg = np.round(rng.uniform(0.3, 2.0, 8), 2)
    xg = np.round(rng.uniform(-4.0, 4.0, 8), 2)
    tg = np.unique(tg)
    xg = np.unique(xg)
    fld = builder(spec, eq, grid)
    values = fld.realize_ensemble(tg, xg, int(seed), 2000)
    hits = 0
    for _ in range(20):
        t, tp = rng.choice(tg, 2)
        x, xp = rng.choice(xg, 2)
        q = CovarianceQuery(float(t), float(tp), float(x), float(xp))
        emp = empirical_covariance(values, q, tg, xg)
        theo = cov_fn(spec, q)
        if abs(emp.estimate - theo) <= 3.0 * emp.standard_error:
            hits += 1
    return hits, 20


def criterion_5_monte_carlo() -> CriterionResult:
    from .field_simulator import example2_grid, example4_grid
    from .spectral_model import example1_spectrum, example2_spectrum

    def run():
        jobs = [
            ("even A0=0", example2_spectrum(), EquationSpec(4),
             example2_grid(), limit_even_field,
             lambda s, q: covariance_engine.cov_limit_even(s, 4, q), 1001),
            ("even A0!=0", example1_spectrum(), EquationSpec(4),
             example2_grid(), limit_even_field,
             lambda s, q: covariance_engine.cov_limit_even(s, 4, q), 1002),
            ("odd A0=0", example2_spectrum(), EquationSpec(3, 1),
             example4_grid(), limit_odd_smoothed_field,
             lambda s, q: covariance_engine.cov_limit_odd_smoothed(
                 s, EquationSpec(3, 1), q), 1003),
            ("odd A0!=0", example1_spectrum(), EquationSpec(3, 1),
             example4_grid(), limit_odd_smoothed_field,
             lambda s, q: covariance_engine.cov_limit_odd_smoothed(
                 s, EquationSpec(3, 1), q), 1004),
        ]
        parts = []
        ok = True
        for name, spec, eq, grid, builder, cov_fn, seed in jobs:
            hits, total = _mc_regime(spec, eq, grid, builder, cov_fn, seed)
            ok = ok and hits / total >= 0.95
            parts.append(f"{name} {hits}/{total}")
        return ok, "within 3 SE: " + ", ".join(parts) + " (need >= 95%)"

    return _timed(5, "2000-replicate empirical covariance matches theory", run)


def criterion_6_residual_ladders() -> CriterionResult:
    from .spectral_model import example1_spectrum, example2_spectrum

    def run():
        jobs = [
            (example2_spectrum(), EquationSpec(4)),
            (example1_spectrum(), EquationSpec(4)),
            (example2_spectrum(), EquationSpec(3, 1)),
            (example1_spectrum(), EquationSpec(3, 1)),
        ]
        parts = []
        ok = True
        for spec, eq in jobs:
            curve = convergence_lab.residual_ladder(spec, eq, 1.0)
            r = curve.residuals
            good = (
                all(v > 0 for v in r)
                and all(b < a for a, b in zip(r[:-1], r[1:]))
                and r[-1] / r[0] < 0.05
            )
            ok = ok and good
            parts.append(f"{curve.regime} ratio {r[-1] / r[0]:.1e}")
        return ok, ", ".join(parts) + " (need < 0.05, strictly decreasing)"

    return _timed(6, "residual ladders decrease over the eps ladder", run)


def criterion_7_naive_divergence() -> CriterionResult:
    def run():
        c, k0 = 0.7, 0.2
        ok = True
        prev_a = prev_b = 0.0
        for L in (10.0, 100.0, 1000.0, 10000.0):
            a = convergence_lab.naive_odd_variance(L, c)
            b = convergence_lab.naive_odd_variance(L, c, k0)
            ok = ok and a == 2.0 * c * c * L
            ok = ok and b == 2.0 * c * c * L**k0 / k0
            ok = ok and a > prev_a and b > prev_b
            prev_a, prev_b = a, b
        return ok, "closed forms exact at machine precision, monotone in L"

    return _timed(7, "naive odd-order variances match closed forms and diverge", run)


def criterion_8_kernel_identity() -> CriterionResult:
    from .numerics import integrate_finite

    def run():
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(25):
            x = rng.uniform(-3.0, 3.0)
            lam = rng.uniform(-4.0, 4.0)
            re = integrate_finite(
                lambda y: math.exp(-((y - x) ** 2)) * math.cos(lam * y),
                x - 10.0, x + 10.0, (), 1e-10,
            ).value
            im = integrate_finite(
                lambda y: math.exp(-((y - x) ** 2)) * math.sin(lam * y),
                x - 10.0, x + 10.0, (), 1e-10,
            ).value
            want = math.sqrt(math.pi) * math.exp(-lam * lam / 4.0)
            worst = max(
                worst,
                abs(re - want * math.cos(lam * x)),
                abs(im - want * math.sin(lam * x)),
            )
        return worst <= 1e-8, f"max deviation {worst:.2e} (tol 1e-8)"

    return _timed(8, "Gaussian kernel smoothing Fourier identity", run)


def criterion_9_stationarity() -> CriterionResult:
    from .spectral_model import example1_spectrum, example2_spectrum

    def run():
        spec = example2_spectrum()
        q0 = CovarianceQuery(0.5, 0.7, 1.0, 0.0)
        q1 = CovarianceQuery(1.5, 1.7, 1.0, 0.0)
        even_ratio = covariance_engine.cov_limit_even(spec, 4, q1) / \
            covariance_engine.cov_limit_even(spec, 4, q0)
        even_ok = abs(even_ratio - 1.0) > 0.10

        eq = EquationSpec(3, 1)
        worst = 0.0
        for spec_odd in (example2_spectrum(), example1_spectrum()):
            a = covariance_engine.cov_limit_odd_smoothed(spec_odd, eq, q0)
            b = covariance_engine.cov_limit_odd_smoothed(spec_odd, eq, q1)
            worst = max(worst, abs(a - b))
        odd_ok = worst <= 1e-8
        detail = (f"even time-shift ratio {even_ratio:.3f} (need |r-1| > 0.1), "
                  f"odd shift deviation {worst:.1e} (tol 1e-8)")
        return even_ok and odd_ok, detail

    return _timed(9, "even limit is time-nonstationary, odd smoothed is stationary", run)


def criterion_10_figure_regimes() -> CriterionResult:
    from .spectral_model import example1_spectrum, example2_spectrum

    def run():
        spec0 = example2_spectrum()
        q = CovarianceQuery(2.5, 2.5, 1.5, 0.0)
        sweep = [covariance_engine.cov_limit_even(spec0, m, q) for m in (2, 4, 6, 8)]
        ordered = all(b > a for a, b in zip(sweep[:-1], sweep[1:]))

        spec1 = example1_spectrum()
        # normalized spatial profiles at t+t'=5, m=4
        def profile(spec, dx):
            qq = CovarianceQuery(2.5, 2.5, dx, 0.0)
            q0 = CovarianceQuery(2.5, 2.5, 0.0, 0.0)
            return covariance_engine.cov_limit_even(spec, 4, qq) / \
                covariance_engine.cov_limit_even(spec, 4, q0)

        slower = all(
            abs(profile(spec1, dx)) > abs(profile(spec0, dx))
            for dx in (2.0, 3.0, 4.0)
        )
        detail = (f"m-sweep values {['%.4f' % v for v in sweep]} increasing={ordered}; "
                  f"A0!=0 spatial decay slower={slower}")
        return ordered and slower, detail

    return _timed(10, "m-sweep ordering and A0 spatial-decay comparison", run)


ALL_CRITERIA = (
    criterion_1_bessel_theta,
    criterion_2_fourier_pair,
    criterion_3_m2_reduction,
    criterion_4_dual_path,
    criterion_5_monte_carlo,
    criterion_6_residual_ladders,
    criterion_7_naive_divergence,
    criterion_8_kernel_identity,
    criterion_9_stationarity,
    criterion_10_figure_regimes,
)


def cmd_selftest(out_dir: Path, emit_csv: bool = True,
                 stream=sys.stdout) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        print(res.line(), file=stream, flush=True)
    report = out_dir / "selftest_report.txt"
    report.write_text("\n".join(r.line() for r in results) + "\n")
    if emit_csv:
        for name in ("example2", "example3", "example4", "example5"):
            cfg_path = bundled_config(name)
            cfg = parse_config(cfg_path, out_override=out_dir / name)
            cmd_figures_data(cfg, cfg_path)
    return EXIT_OK if all(r.passed for r in results) else 1


# --- entry point ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hheat",
        description="Simulate and verify scaling limits of high-order "
                    "heat-type equations with singular spectral initial data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "covariance", "residual", "figures-data"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=Path, default=Path("."))
    p = sub.add_parser("selftest")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("selftest_out"))
    p.add_argument("--no-csv", action="store_true",
                   help="skip emitting the figure-data CSV bundle")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return cmd_selftest(args.out, emit_csv=not args.no_csv)
        cfg = parse_config(args.config, args.seed, args.out)
        handler = {
            "simulate": cmd_simulate,
            "covariance": cmd_covariance,
            "residual": cmd_residual,
            "figures-data": cmd_figures_data,
        }[args.command]
        outputs = handler(cfg, args.config)
        for p in outputs:
            print(p)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HHeatError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
