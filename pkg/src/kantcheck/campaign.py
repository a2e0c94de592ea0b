"""Configuration-driven conformance campaigns.

A campaign enumerates parameter cells (suite x window x exponents),
generates ``samples_per_cell`` certified instances per cell with seeds
split as ``base_seed + global_index``, runs the suite's chain check on
each, and writes JSON-lines reports plus a summary CSV.  Output is
deterministic for a fixed configuration: report files embed the config
and its hash so any report can be reproduced byte-for-byte from its own
header.  Work items are pure functions of (seed, cell), so the loop can
be fanned out; this runner executes them serially and merges in
enumeration order.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .constants import (
    alpha_ratio,
    beta_generic,
    beta_power_closed,
    kantorovich_C,
    kantorovich_C2,
    kantorovich_K,
    kantorovich_K2,
    power_fun,
)
from .errors import ConfigError
from .generators import (
    WINDOW_ON_A,
    gen_chaotic_pair,
    gen_dominated_pair,
    gen_positive_linear_map,
    gen_relative_pair,
    gen_weighted_family,
)
from .hermitian import SpectralWindow
from .verifiers import (
    CHAIN_CATALOG,
    check_corollary_2_2,
    check_corollary_2_3,
    check_corollary_2_4,
    check_corollary_3_2,
    check_corollary_3_3,
    check_corollary_4_3,
    check_corollary_4_4,
    check_lemma_3_1_forward,
    check_theorem_1_1,
    check_theorem_2_1,
    check_theorem_4_1,
    check_theorem_4_2,
    check_theorem_4_5,
)

ALL_SUITES = [
    "theorem_1_1",
    "theorem_2_1",
    "corollary_2_2",
    "corollary_2_3",
    "corollary_2_4",
    "lemma_3_1",
    "corollary_3_2",
    "corollary_3_3",
    "theorem_4_1",
    "theorem_4_2",
    "corollary_4_3",
    "corollary_4_4",
    "theorem_4_5",
]

MAP_SEED_OFFSET = 1 << 32
DEGENERATE_GAP = 0.05


@dataclass
class CampaignConfig:
    """Everything a campaign run depends on; hashable and JSON-round-trippable."""

    suites: list = field(default_factory=lambda: list(ALL_SUITES))
    dims: list = field(default_factory=lambda: [2, 3, 4, 6])
    windows: list = field(default_factory=lambda: [(1.0, 2.0), (0.5, 4.0), (2.0, 3.0)])
    p_grid: list = field(default_factory=lambda: [-3.0, -2.0, -1.0, -0.5, -0.25])
    q_grid: list = field(default_factory=lambda: [-1.0, -0.75, -0.5, -0.25])
    r_grid: list = field(default_factory=lambda: [-1.0, -0.5, -0.25])
    alpha_grid: list = field(default_factory=lambda: [0.5, 1.0, 2.0])
    p_grid_theorem_1_1: list = field(default_factory=lambda: [1.5, 2.0, 3.0])
    samples_per_cell: int = 200
    base_seed: int = 1
    rel_tol: float = 1e-8
    fuzz_samples: int = 10_000
    output_dir: str = "campaign_out"

    def semantic_dict(self) -> dict:
        """Config content that defines the run; the output path is excluded
        so identical runs into different directories stay byte-identical."""
        data = asdict(self)
        data.pop("output_dir")
        data["windows"] = [[float(m), float(M)] for m, M in self.windows]
        return data

    def config_hash(self) -> str:
        payload = json.dumps(self.semantic_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict, output_dir: str | None = None) -> "CampaignConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "windows" in kwargs:
            kwargs["windows"] = [tuple(w) for w in kwargs["windows"]]
        if output_dir is not None:
            kwargs["output_dir"] = output_dir
        return cls(**kwargs)


def load_config(path) -> CampaignConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return CampaignConfig.from_dict(data)


def validate_config(cfg: CampaignConfig) -> None:
    """Reject configurations whose grids leave a suite's supported regime."""
    for suite in cfg.suites:
        if suite not in ALL_SUITES:
            raise ConfigError(f"unknown suite {suite!r}; known: {ALL_SUITES}")
    if cfg.samples_per_cell < 1:
        raise ConfigError(f"samples_per_cell must be >= 1, got {cfg.samples_per_cell}")
    if not cfg.dims:
        raise ConfigError("dims must be nonempty")
    for dim in cfg.dims:
        if not 1 <= int(dim) <= 64:
            raise ConfigError(f"dim {dim} outside [1, 64]")
    if not cfg.windows:
        raise ConfigError("windows must be nonempty")
    for m, upper in cfg.windows:
        if not 0.0 < float(m) < float(upper):
            raise ConfigError(f"window ({m}, {upper}) must satisfy 0 < m < M")
    for p in cfg.p_grid:
        if p > -DEGENERATE_GAP:
            raise ConfigError(f"p_grid cell p={p} violates p <= -{DEGENERATE_GAP} "
                              "(degenerate-exponent exclusion)")
    for q in cfg.q_grid:
        if not -1.0 <= q <= -DEGENERATE_GAP:
            raise ConfigError(f"q_grid cell q={q} outside [-1, -{DEGENERATE_GAP}]")
    for r in cfg.r_grid:
        if not -1.0 <= r <= -DEGENERATE_GAP:
            raise ConfigError(f"r_grid cell r={r} outside [-1, -{DEGENERATE_GAP}]")
    for alpha in cfg.alpha_grid:
        if alpha <= 0.0:
            raise ConfigError(f"alpha_grid cell alpha={alpha} must be positive")
    for p in cfg.p_grid_theorem_1_1:
        if p < 1.0 + DEGENERATE_GAP:
            raise ConfigError(f"p_grid_theorem_1_1 cell p={p} violates p >= {1.0 + DEGENERATE_GAP}")
    if cfg.rel_tol <= 0.0:
        raise ConfigError(f"rel_tol must be positive, got {cfg.rel_tol}")


@dataclass
class Cell:
    suite: str
    params: dict
    global_index: int = 0


def enumerate_cells(cfg: CampaignConfig) -> list:
    """Deterministic cell order: suites as configured, grids as listed."""
    cells = []

    def add(suite, **params):
        cells.append(Cell(suite=suite, params=params))

    for suite in cfg.suites:
        for window in cfg.windows:
            window = (float(window[0]), float(window[1]))
            if suite == "theorem_1_1":
                for p in cfg.p_grid_theorem_1_1:
                    add(suite, window=window, p=float(p))
            elif suite in ("theorem_2_1", "corollary_2_3", "corollary_2_4", "theorem_4_1"):
                for p in cfg.p_grid:
                    for q in cfg.q_grid:
                        add(suite, window=window, p=float(p), q=float(q))
            elif suite == "corollary_2_2":
                for p in cfg.p_grid:
                    for q in cfg.q_grid:
                        for alpha in cfg.alpha_grid:
                            add(suite, window=window, p=float(p), q=float(q), alpha=float(alpha))
            elif suite in ("lemma_3_1", "corollary_3_2", "corollary_3_3"):
                for p in cfg.p_grid:
                    for r in cfg.r_grid:
                        add(suite, window=window, p=float(p), r=float(r))
            elif suite in ("theorem_4_2", "corollary_4_3"):
                for p in cfg.p_grid:
                    add(suite, window=window, p=float(p))
            elif suite == "corollary_4_4":
                for p in cfg.p_grid:
                    for mode in ("ratio", "difference"):
                        add(suite, window=window, p=float(p), mode=mode)
            elif suite == "theorem_4_5":
                for p in cfg.q_grid:  # regime -1 <= p < 0
                    add(suite, window=window, p=float(p))
            else:  # pragma: no cover - guarded by validate_config
                raise ConfigError(f"unknown suite {suite!r}")
    for index, cell in enumerate(cells):
        cell.global_index = index
    return cells


def _cell_seeds(cfg: CampaignConfig, cell: Cell) -> list:
    base = cfg.base_seed + cell.global_index * cfg.samples_per_cell
    return [base + j for j in range(cfg.samples_per_cell)]


def _dim_for(cfg: CampaignConfig, j: int) -> int:
    return int(cfg.dims[j % len(cfg.dims)])


def _out_dim(dim: int) -> int:
    return max(1, dim - 1)


def _kraus_count(seed: int) -> int:
    return 1 + seed % 3


def run_cell(cfg: CampaignConfig, cell: Cell) -> tuple[list, float | None]:
    """Run every sample of one parameter cell.

    Returns the chain reports plus the absolute closed-form-vs-oracle
    deviation of the cell's constant, when the suite has one.
    """
    w = SpectralWindow(*cell.params["window"])
    seeds = _cell_seeds(cfg, cell)
    suite = cell.suite
    rel_tol = cfg.rel_tol
    reports = []
    deviation = None

    if suite == "theorem_1_1":
        p = cell.params["p"]
        deviation = abs(kantorovich_K(w, p) - alpha_ratio(power_fun(p), power_fun(p), w).value)
        for j, seed in enumerate(seeds):
            pair = gen_dominated_pair(_dim_for(cfg, j), w, seed, window_side=WINDOW_ON_A)
            reports.append(check_theorem_1_1(pair, p, rel_tol))

    elif suite == "theorem_2_1":
        p, q = cell.params["p"], cell.params["q"]
        f, g = power_fun(p), power_fun(q)
        alpha = alpha_ratio(f, g, w).value  # tight calibration: beta is ~0
        for j, seed in enumerate(seeds):
            pair = gen_dominated_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_theorem_2_1(pair, f, g, alpha, "i", rel_tol))

    elif suite == "corollary_2_2":
        p, q, alpha = cell.params["p"], cell.params["q"], cell.params["alpha"]
        deviation = abs(beta_power_closed(w, p, q, alpha)
                        - beta_generic(power_fun(p), power_fun(q), alpha, w).value)
        for j, seed in enumerate(seeds):
            pair = gen_dominated_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_corollary_2_2(pair, p, q, alpha, rel_tol))

    elif suite == "corollary_2_3":
        p, q = cell.params["p"], cell.params["q"]
        deviation = abs(kantorovich_K2(w, p, q) - alpha_ratio(power_fun(p), power_fun(q), w).value)
        for j, seed in enumerate(seeds):
            pair = gen_dominated_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_corollary_2_3(pair, p, q, rel_tol))

    elif suite == "corollary_2_4":
        p, q = cell.params["p"], cell.params["q"]
        deviation = abs(kantorovich_C2(w, p, q)
                        - beta_generic(power_fun(p), power_fun(q), 1.0, w).value)
        for j, seed in enumerate(seeds):
            pair = gen_dominated_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_corollary_2_4(pair, p, q, rel_tol))

    elif suite == "lemma_3_1":
        p, r = cell.params["p"], cell.params["r"]
        for j, seed in enumerate(seeds):
            pair = gen_chaotic_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_lemma_3_1_forward(pair, p, r, rel_tol))

    elif suite == "corollary_3_2":
        p, r = cell.params["p"], cell.params["r"]
        s = p + r
        deviation = abs(kantorovich_K(w, s) - alpha_ratio(power_fun(s), power_fun(s), w).value)
        for j, seed in enumerate(seeds):
            pair = gen_chaotic_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_corollary_3_2(pair, p, r, rel_tol))

    elif suite == "corollary_3_3":
        p, r = cell.params["p"], cell.params["r"]
        s = p + r
        deviation = abs(kantorovich_C(w, s)
                        - beta_generic(power_fun(s), power_fun(s), 1.0, w).value)
        for j, seed in enumerate(seeds):
            pair = gen_chaotic_pair(_dim_for(cfg, j), w, seed)
            reports.append(check_corollary_3_3(pair, p, r, rel_tol))

    elif suite == "theorem_4_1":
        p, q = cell.params["p"], cell.params["q"]
        f, g = power_fun(p), power_fun(q)
        alpha = alpha_ratio(f, g, w).value
        for j, seed in enumerate(seeds):
            dim = _dim_for(cfg, j)
            family = gen_weighted_family(3, dim, _out_dim(dim), w, seed)
            report = check_theorem_4_1(family, f, g, alpha, rel_tol)
            report.seed = seed
            reports.append(report)

    elif suite == "theorem_4_2":
        p = cell.params["p"]
        alpha = kantorovich_K(w, p)
        deviation = abs(beta_generic(power_fun(p), power_fun(p), alpha, w).value
                        - beta_power_closed(w, p, p, alpha))
        for j, seed in enumerate(seeds):
            dim = _dim_for(cfg, j)
            pair = gen_relative_pair(dim, w, seed)
            phi = gen_positive_linear_map(dim, _out_dim(dim), _kraus_count(seed),
                                          seed + MAP_SEED_OFFSET)
            reports.append(check_theorem_4_2(pair, phi, power_fun(p), alpha, rel_tol))

    elif suite == "corollary_4_3":
        p = cell.params["p"]
        alpha = kantorovich_K(w, p)
        deviation = abs(beta_power_closed(w, p, p, alpha)
                        - beta_generic(power_fun(p), power_fun(p), alpha, w).value)
        for j, seed in enumerate(seeds):
            dim = _dim_for(cfg, j)
            pair = gen_relative_pair(dim, w, seed)
            phi = gen_positive_linear_map(dim, _out_dim(dim), _kraus_count(seed),
                                          seed + MAP_SEED_OFFSET)
            reports.append(check_corollary_4_3(pair, phi, p, alpha, rel_tol))

    elif suite == "corollary_4_4":
        p, mode = cell.params["p"], cell.params["mode"]
        if mode == "ratio":
            deviation = abs(kantorovich_K(w, p)
                            - alpha_ratio(power_fun(p), power_fun(p), w).value)
        else:
            deviation = abs(kantorovich_C(w, p)
                            - beta_generic(power_fun(p), power_fun(p), 1.0, w).value)
        for j, seed in enumerate(seeds):
            dim = _dim_for(cfg, j)
            pair = gen_relative_pair(dim, w, seed)
            phi = gen_positive_linear_map(dim, _out_dim(dim), _kraus_count(seed),
                                          seed + MAP_SEED_OFFSET)
            reports.append(check_corollary_4_4(pair, phi, p, mode, rel_tol))

    elif suite == "theorem_4_5":
        p = cell.params["p"]
        deviation = max(
            abs(kantorovich_K(w, p) - alpha_ratio(power_fun(p), power_fun(p), w).value),
            abs(kantorovich_C(w, p) - beta_generic(power_fun(p), power_fun(p), 1.0, w).value),
        )
        for j, seed in enumerate(seeds):
            dim = _dim_for(cfg, j)
            pair = gen_relative_pair(dim, w, seed)
            phi = gen_positive_linear_map(dim, _out_dim(dim), _kraus_count(seed),
                                          seed + MAP_SEED_OFFSET)
            reports.append(check_theorem_4_5(pair, phi, p, rel_tol))

    else:  # pragma: no cover
        raise ConfigError(f"unknown suite {suite!r}")
    return reports, deviation


@dataclass
class SuiteStats:
    suite: str
    cells: int = 0
    checks: int = 0
    passed: int = 0
    failed: int = 0
    tight_links: int = 0
    worst_slack: float = float("inf")
    max_constant_dev: float | None = None

    def absorb(self, reports, deviation) -> None:
        self.cells += 1
        for report in reports:
            self.checks += 1
            if report.overall:
                self.passed += 1
            else:
                self.failed += 1
            for link in report.links:
                self.tight_links += int(link.tight)
                self.worst_slack = min(self.worst_slack, link.min_slack)
        if deviation is not None:
            current = self.max_constant_dev if self.max_constant_dev is not None else 0.0
            self.max_constant_dev = max(current, deviation)


@dataclass
class CampaignSummary:
    suites: dict
    config_hash: str
    output_dir: str
    wall_seconds: float

    @property
    def total_checks(self) -> int:
        return sum(s.checks for s in self.suites.values())

    @property
    def total_failures(self) -> int:
        return sum(s.failed for s in self.suites.values())

    @property
    def max_constant_deviation(self) -> float:
        devs = [s.max_constant_dev for s in self.suites.values() if s.max_constant_dev is not None]
        return max(devs) if devs else 0.0

    @property
    def exit_code(self) -> int:
        return 0 if self.total_failures == 0 else 1


SUMMARY_COLUMNS = ["theorem_id", "cells", "checks", "pass_count", "tight_count",
                   "fail_count", "worst_slack", "max_constant_deviation"]


def _write_summary_csv(path: Path, stats: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SUMMARY_COLUMNS)
        for suite, s in stats.items():
            worst = "" if s.worst_slack == float("inf") else repr(s.worst_slack)
            dev = "" if s.max_constant_dev is None else repr(s.max_constant_dev)
            writer.writerow([suite, s.cells, s.checks, s.passed, s.tight_links,
                             s.failed, worst, dev])


def run_campaign(cfg: CampaignConfig) -> CampaignSummary:
    """Execute the configured suites and write reports under cfg.output_dir.

    Deterministic for a fixed config: two runs produce byte-identical
    report files.  Returns the in-memory summary; the exit-code contract
    (0 iff zero conformance failures) lives on the summary.
    """
    validate_config(cfg)
    started = time.perf_counter()
    out_dir = Path(cfg.output_dir)
    reports_dir = out_dir / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    cells = enumerate_cells(cfg)
    config_hash = cfg.config_hash()

    stats: dict = {}
    handles: dict = {}
    try:
        for suite in cfg.suites:
            stats[suite] = SuiteStats(suite=suite)
            handle = open(reports_dir / f"{suite}.jsonl", "w", encoding="utf-8")
            handles[suite] = handle
            header = {
                "suite": suite,
                "statement": CHAIN_CATALOG[suite],
                "config_hash": config_hash,
                "base_seed": cfg.base_seed,
                "config": cfg.semantic_dict(),
            }
            handle.write(json.dumps(header, separators=(",", ":")) + "\n")
        for cell in cells:
            reports, deviation = run_cell(cfg, cell)
            stats[cell.suite].absorb(reports, deviation)
            handle = handles[cell.suite]
            for report in reports:
                handle.write(json.dumps(report.to_json_dict(), separators=(",", ":")) + "\n")
    finally:
        for handle in handles.values():
            handle.close()

    _write_summary_csv(out_dir / "summary.csv", stats)
    return CampaignSummary(
        suites=stats,
        config_hash=config_hash,
        output_dir=str(out_dir),
        wall_seconds=time.perf_counter() - started,
    )


def summarize_report_file(path) -> str:
    """Human-readable digest of a report JSONL or a summary CSV."""
    path = Path(path)
    lines = []
    if path.suffix == ".csv":
        with open(path, "r", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        for row in rows:
            lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)))
        return "\n".join(lines)
    with open(path, "r", encoding="utf-8") as handle:
        header = json.loads(handle.readline())
        checks = passed = 0
        worst = float("inf")
        for raw in handle:
            record = json.loads(raw)
            checks += 1
            passed += int(record["overall"])
            worst = min(worst, min(l["min_slack"] for l in record["links"]))
    lines.append(f"suite:        {header['suite']}")
    lines.append(f"statement:    {header['statement']}")
    lines.append(f"config_hash:  {header['config_hash']}   base_seed: {header['base_seed']}")
    lines.append(f"checks:       {checks}   passed: {passed}   failed: {checks - passed}")
    if checks:
        lines.append(f"worst_slack:  {worst:.6e}")
    return "\n".join(lines)
