"""Batch driver: run experiment suites and write report.txt, summary.json and the sweep CSV.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration,
3 truncation overflow (window too small), 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import reference_oracles as oracles
from .dilation import BigSpace
from .grid_fock import GridSpec, TruncationOverflow, basis_dimension
from .markov_compression import (
    DENSE_LIMIT,
    Report,
    isometry_defect_diagonal,
    observation_crosscheck,
    semigroup_check,
    shifted_compression_check,
    verify_theorem,
)
from .product_system import ProductSystem, Unit

log = logging.getLogger(__name__)

EXPERIMENTS = ("theorem", "observation", "semigroup", "intertwine", "sweep", "all")
SWEEP_GRID = (8, 16, 32, 64)
CSV_COLUMNS = [
    "m_unit", "cutoff", "c_re", "c_im", "k", "M2_grid", "M2_closed_form",
    "T1a_norm", "isometry_defect", "semigroup_defect", "runtime_ms",
]
# largest time argument each experiment pushes through the window
WINDOW_NEEDS = {"theorem": 1, "observation": 1, "semigroup": 2, "intertwine": 2, "sweep": 1}
SEMIGROUP_SWEEP_LIMIT = 600

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_OVERFLOW, EXIT_IO = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    cells_per_unit: int = 8
    cutoff: int = 2
    unit_re: float = 0.0
    unit_im: float = 0.0
    window: int = 3
    onb_index: int = 2
    experiment: str = "theorem"
    out: str = "report"
    seed: int = 0
    timing: bool = True

    @property
    def c(self) -> complex:
        return complex(self.unit_re, self.unit_im)

    def validate(self):
        if self.cells_per_unit < 1:
            raise ConfigError("--cells-per-unit must be positive")
        if self.cutoff < 1:
            raise ConfigError("--cutoff must be positive")
        if self.window < 1:
            raise ConfigError("--window must be positive")
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not all(math.isfinite(v) for v in (self.unit_re, self.unit_im)):
            raise ConfigError("unit parameter must be finite")
        kmax = basis_dimension(1, self.cutoff)
        if not 1 <= self.onb_index <= kmax:
            raise ConfigError(f"--onb-index must lie in [1, {kmax}] at cutoff {self.cutoff}")


def _check_window(cfg: RunConfig, experiment: str):
    need = WINDOW_NEEDS[experiment] + 1
    if cfg.window < need:
        raise TruncationOverflow(f"experiment {experiment!r} needs --window >= {need}, got {cfg.window}")


def run_theorem(cfg: RunConfig, rng) -> Report:
    system = ProductSystem(GridSpec(cfg.cells_per_unit, cfg.cutoff))
    closed = oracles.closed_form_m2(cfg.c, cfg.cells_per_unit, cfg.cutoff)
    if cfg.onb_index != 1:
        closed = None  # the closed form covers the first basis vector only
    rep = verify_theorem(system, Unit(system, cfg.c), cfg.onb_index, samples=20, rng=rng)
    if closed is not None:
        rep.add_close("M^2 grid vs closed form", rep.info["M2"], closed, 1e-10,
                      "reference_oracles: closed_form_m2 matches m_integral")
        tol = 1e-10 if closed == 0 else 0.02
        rep.add_le("||T_1(a)|| <= closed_form_m2", rep.info["norm_T1a"], closed, tol,
                   "cli_report: oracle-generated bound")
    return rep


def run_observation(cfg: RunConfig, rng) -> Report:
    system = ProductSystem(GridSpec(cfg.cells_per_unit, cfg.cutoff))
    # y pieces come from an independent unit: coherent against the vacuum, vacuum otherwise
    c_y = 1.0 if cfg.c == 0 else 0.0
    return observation_crosscheck(system, cfg.c, c_y=c_y, n=1)


def _dim_L(cfg: RunConfig) -> int:
    return sum(basis_dimension(a, cfg.cutoff) for a in range(1, cfg.cells_per_unit + 1))


def run_semigroup(cfg: RunConfig, rng) -> Report:
    if _dim_L(cfg) > DENSE_LIMIT:
        raise ConfigError(f"semigroup check needs dim L <= {DENSE_LIMIT}; reduce --cells-per-unit or --cutoff")
    system = ProductSystem(GridSpec(cfg.cells_per_unit, cfg.cutoff))
    unit = Unit(system, cfg.c)
    rep = semigroup_check(unit, samples=20, rng=rng)
    rep.add_le("||G_1* G_1 - id||", isometry_defect_diagonal(1, unit),
               oracles.isometry_defect_bound(cfg.c, 1, cfg.cutoff), 1e-10, "markov_compression: isometry defect")
    return rep


def run_intertwine(cfg: RunConfig, rng) -> Report:
    if cfg.c != 0:
        raise ConfigError("the window dilation realizes the vacuum unit only; use --unit-re 0 --unit-im 0")
    system = ProductSystem(GridSpec(cfg.cells_per_unit, cfg.cutoff))
    return shifted_compression_check(BigSpace(system, cfg.window), Unit(system, 0.0), 1, 1, samples=10, rng=rng)


def sweep_rows(cfg: RunConfig, rng) -> tuple[list[dict], Report]:
    rep = Report("sweep")
    rows = []
    for m in SWEEP_GRID:
        t0 = time.perf_counter()
        system = ProductSystem(GridSpec(m, cfg.cutoff))
        unit = Unit(system, cfg.c)
        th = verify_theorem(system, unit, cfg.onb_index, samples=0, rng=rng)
        dim_L = _dim_L(RunConfig(cells_per_unit=m, cutoff=cfg.cutoff))
        semi = math.nan
        if unit.is_vacuum and dim_L <= SEMIGROUP_SWEEP_LIMIT:
            semi = semigroup_check(unit, samples=3, rng=rng).info["semigroup_defect"]
        closed = oracles.closed_form_m2(cfg.c, m, cfg.cutoff) if cfg.onb_index == 1 else math.nan
        rows.append(dict(
            m_unit=m, cutoff=cfg.cutoff, c_re=cfg.c.real, c_im=cfg.c.imag, k=cfg.onb_index,
            M2_grid=th.info["M2"], M2_closed_form=closed, T1a_norm=th.info["norm_T1a"],
            isometry_defect=isometry_defect_diagonal(1, unit), semigroup_defect=semi,
            runtime_ms=round(1000 * (time.perf_counter() - t0)) if cfg.timing else 0,
        ))
        rep.add_le(f"m={m}: ||T_1(a)|| <= M^2", th.info["norm_T1a"], th.info["M2"], 1e-8, "verify_theorem (ii)")
        if not math.isnan(closed):
            rep.add_close(f"m={m}: M^2 grid vs closed form", th.info["M2"], closed, 1e-10,
                          "reference_oracles: closed_form_m2")
    if cfg.onb_index == 1 and cfg.c != 0:
        limit = oracles.continuum_m2(cfg.c, cfg.cutoff)
        errs = [abs(r["M2_grid"] - limit) for r in rows]
        for (m0, e0), (m1, e1) in zip(zip(SWEEP_GRID, errs), zip(SWEEP_GRID[1:], errs[1:])):
            rep.add_close(f"O(h) ratio err(m={m0})/err(m={m1})", e0 / e1, 2.0, 0.3,
                          "cli_report: first-order quadrature against the fixed-cutoff continuum")
        rep.info.update(continuum_m2=limit, limit_m2=oracles.limit_m2(cfg.c))
    return rows, rep


def write_csv(path: Path, rows: list[dict]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in r.items()})


def _summary(experiment: str, reports: list[Report]) -> dict:
    bounds = [
        dict(name=f"{r.experiment}: {c.name}", value=c.value, expected=c.expected, tol=c.tol, passed=c.passed)
        for r in reports for c in r.checks
    ]
    return dict(experiment=experiment, **{"pass": all(r.passed for r in reports)}, bounds=bounds)


def _report_text(cfg: RunConfig, reports: list[Report]) -> str:
    lines = [f"config: {json.dumps(asdict(cfg), sort_keys=True)}", ""]
    for r in reports:
        lines.append(f"== {r.experiment} ==")
        lines.extend(c.line() for c in r.checks)
        for k, v in r.info.items():
            lines.append(f"  {k} = {v}")
        lines.append("")
    lines.append("RESULT: " + ("PASS" if all(r.passed for r in reports) else "FAIL"))
    return "\n".join(lines) + "\n"


def run_experiment(cfg: RunConfig) -> int:
    try:
        cfg.validate()
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rng = np.random.default_rng(cfg.seed)
    names = [e for e in EXPERIMENTS if e != "all"] if cfg.experiment == "all" else [cfg.experiment]
    if cfg.experiment == "all" and cfg.c != 0:
        names.remove("intertwine")
    reports, rows = [], None
    try:
        for name in names:
            _check_window(cfg, name)
            log.info("running %s", name)
            if name == "sweep":
                rows, rep = sweep_rows(cfg, rng)
            else:
                rep = {"theorem": run_theorem, "observation": run_observation, "semigroup": run_semigroup,
                       "intertwine": run_intertwine}[name](cfg, rng)
            reports.append(rep)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationOverflow as exc:
        print(f"truncation overflow: {exc}. Increase --window (time units of K_breve).", file=sys.stderr)
        return EXIT_OVERFLOW

    text = _report_text(cfg, reports)
    try:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text, encoding="utf-8")
        with open(out / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(_summary(cfg.experiment, reports), fh, indent=2)
        if rows is not None:
            write_csv(out / "convergence.csv", rows)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fockdilation", description=__doc__.splitlines()[0])
    p.add_argument("--cells-per-unit", type=int, default=8, help="grid cells per unit time (h = 1/m)")
    p.add_argument("--cutoff", type=int, default=2, help="total particle-number cutoff")
    p.add_argument("--unit-re", type=float, default=0.0, help="real part of the coherent unit parameter")
    p.add_argument("--unit-im", type=float, default=0.0, help="imaginary part of the coherent unit parameter")
    p.add_argument("--window", type=int, default=3, help="K_breve window in time units")
    p.add_argument("--onb-index", type=int, default=2, help="1-based graded-lex basis index k")
    p.add_argument("--experiment", choices=EXPERIMENTS, default="theorem")
    p.add_argument("--out", default="report", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true", help="write runtime_ms = 0 so the CSV is byte-reproducible")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig(
        cells_per_unit=args.cells_per_unit, cutoff=args.cutoff, unit_re=args.unit_re, unit_im=args.unit_im,
        window=args.window, onb_index=args.onb_index, experiment=args.experiment, out=args.out, seed=args.seed,
        timing=not args.no_timing,
    )
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
