"""Config-driven experiment harness with deterministic CSV emission.

One row per (trial, method) in results.csv, aggregated per method in
summary.csv. Reruns with the same config are byte-identical by default:
runtime columns stay 0 unless timings are explicitly enabled, since wall
clock would break reproducibility.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .fileio import fmt_float
from .frechet import frechet_metric, kothe_from_measurement
from .measure import transition_point
from .operators import Dictionary
from .rearrangement import weak_l1_quasinorm
from .recovery import cskle_basis, cskle_recover, forward, omp_recover
from .signals import ChirpComponent, ensemble_chirp, gen_powerlaw, gen_sparse, make_dictionary
from .svgplot import line_chart

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "run_experiment"]

RESULTS_HEADER = (
    "trial,method,status,N,m,k_true,n_opt,criterion,epsilon,support_match,"
    "rel_err_l2,rel_err_frechet,tail_mean,weak_l1,runtime_ms"
)
SUMMARY_HEADER = (
    "method,trials,success_rate,mean_n_opt,mean_rel_err_l2,mean_rel_err_frechet,mean_runtime_ms"
)

SIGNAL_KINDS = ("sparse", "powerlaw", "chirp")
METHODS = ("omp", "cskle", "oracle")


class ConfigError(ValueError):
    """Bad experiment config; carries the offending 1-based line number (0 = semantic)."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"config line {line_no}: {message}" if line_no else message)


@dataclass(frozen=True)
class ExperimentConfig:
    signal_kind: str = "sparse"
    signal_n: int = 128
    signal_k: int | None = None
    signal_alpha: float | None = None
    signal_components: tuple[ChirpComponent, ...] | None = None
    dict_kind: str = "gaussian"
    dict_m: int | None = None
    dict_width: float | None = None
    dict_convention: str | None = None
    criterion: str = "frechet-increment"
    epsilon: float | None = None  # None = auto (1e-6 * top magnitude)
    window: int = 3
    methods: tuple[str, ...] = ("omp",)
    trials: int = 1
    seed_base: int = 0
    kle_ensemble: int = 100
    recover_stop: str = "auto"
    output_dir: str = "out"

    def emit(self) -> str:
        """Canonical text form; parse(emit(cfg)) == cfg."""
        lines = [f"signal.kind = {self.signal_kind}", f"signal.n = {self.signal_n}"]
        if self.signal_k is not None:
            lines.append(f"signal.k = {self.signal_k}")
        if self.signal_alpha is not None:
            lines.append(f"signal.alpha = {fmt_float(self.signal_alpha)}")
        if self.signal_components is not None:
            comps = ",".join(
                f"{fmt_float(c.amplitude)}:{fmt_float(c.start_freq)}:{fmt_float(c.chirp_rate)}"
                for c in self.signal_components
            )
            lines.append(f"signal.components = {comps}")
        lines.append(f"dictionary.kind = {self.dict_kind}")
        if self.dict_m is not None:
            lines.append(f"dictionary.m = {self.dict_m}")
        if self.dict_width is not None:
            lines.append(f"dictionary.width = {fmt_float(self.dict_width)}")
        if self.dict_convention is not None:
            lines.append(f"dictionary.convention = {self.dict_convention}")
        lines.append(f"criterion = {self.criterion}")
        lines.append(f"epsilon = {'auto' if self.epsilon is None else fmt_float(self.epsilon)}")
        lines.append(f"window = {self.window}")
        lines.append(f"methods = {','.join(self.methods)}")
        lines.append(f"trials = {self.trials}")
        lines.append(f"seed_base = {self.seed_base}")
        lines.append(f"kle.ensemble = {self.kle_ensemble}")
        lines.append(f"recover.stop = {self.recover_stop}")
        lines.append(f"output_dir = {self.output_dir}")
        return "\n".join(lines) + "\n"


def _parse_components(value: str, line_no: int) -> tuple[ChirpComponent, ...]:
    comps = []
    for part in value.split(","):
        fields = part.strip().split(":")
        if len(fields) not in (2, 3):
            raise ConfigError(line_no, f"component must be amp:freq[:rate], got {part!r}")
        try:
            nums = [float(f) for f in fields]
        except ValueError:
            raise ConfigError(line_no, f"bad component number in {part!r}") from None
        comps.append(ChirpComponent(*nums))
    return tuple(comps)


def _parse_value(cfg: ExperimentConfig, key: str, value: str, line_no: int) -> ExperimentConfig:
    def as_int(v):
        try:
            return int(v)
        except ValueError:
            raise ConfigError(line_no, f"{key} must be an integer, got {v!r}") from None

    def as_float(v):
        try:
            return float(v)
        except ValueError:
            raise ConfigError(line_no, f"{key} must be a number, got {v!r}") from None

    if key == "signal.kind":
        if value not in SIGNAL_KINDS:
            raise ConfigError(line_no, f"signal.kind must be one of {SIGNAL_KINDS}")
        return replace(cfg, signal_kind=value)
    if key == "signal.n":
        return replace(cfg, signal_n=as_int(value))
    if key == "signal.k":
        return replace(cfg, signal_k=as_int(value))
    if key == "signal.alpha":
        return replace(cfg, signal_alpha=as_float(value))
    if key == "signal.components":
        return replace(cfg, signal_components=_parse_components(value, line_no))
    if key == "dictionary.kind":
        return replace(cfg, dict_kind=value)
    if key == "dictionary.m":
        return replace(cfg, dict_m=as_int(value))
    if key == "dictionary.width":
        return replace(cfg, dict_width=as_float(value))
    if key == "dictionary.convention":
        return replace(cfg, dict_convention=value)
    if key == "criterion":
        return replace(cfg, criterion=value)
    if key == "epsilon":
        return replace(cfg, epsilon=None if value == "auto" else as_float(value))
    if key == "window":
        return replace(cfg, window=as_int(value))
    if key == "methods":
        methods = tuple(m.strip() for m in value.split(",") if m.strip())
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            raise ConfigError(line_no, f"methods must be a subset of {METHODS}")
        return replace(cfg, methods=methods)
    if key == "trials":
        return replace(cfg, trials=as_int(value))
    if key == "seed_base":
        return replace(cfg, seed_base=as_int(value))
    if key == "kle.ensemble":
        return replace(cfg, kle_ensemble=as_int(value))
    if key == "recover.stop":
        return replace(cfg, recover_stop=value)
    if key == "output_dir":
        return replace(cfg, output_dir=value)
    raise ConfigError(line_no, f"unknown key {key!r}")


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.trials < 1:
        raise ConfigError(0, "trials must be >= 1")
    if cfg.signal_n < 1:
        raise ConfigError(0, "signal.n must be >= 1")
    if cfg.signal_kind == "sparse" and cfg.signal_k is None:
        raise ConfigError(0, "signal.kind = sparse needs signal.k")
    if cfg.signal_kind == "powerlaw" and cfg.signal_alpha is None:
        raise ConfigError(0, "signal.kind = powerlaw needs signal.alpha")
    if cfg.signal_kind == "chirp" and not cfg.signal_components:
        raise ConfigError(0, "signal.kind = chirp needs signal.components")
    if cfg.criterion not in ("frechet-increment", "tail-mean"):
        raise ConfigError(0, f"unknown criterion {cfg.criterion!r}")
    stop = cfg.recover_stop
    if stop not in ("auto", "nopt"):
        kind, _, arg = stop.partition(":")
        try:
            int(arg) if kind in ("dim", "iter") else float(arg)
        except ValueError:
            arg = None
        if kind not in ("dim", "res", "iter") or arg is None:
            raise ConfigError(0, f"recover.stop must be auto|nopt|dim:<i>|res:<x>|iter:<i>, got {stop!r}")
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(line_no, f"expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        cfg = _parse_value(cfg, key.strip(), value.strip(), line_no)
    return _validate(cfg)


@dataclass
class _TrialRow:
    trial: int
    method: str
    status: str = "ok"
    n_opt: int | None = None
    epsilon: float | None = None
    support_match: int | None = None
    rel_err_l2: float | None = None
    rel_err_frechet: float | None = None
    tail_mean: float | None = None
    weak_l1: float | None = None
    runtime_ms: float = 0.0


def _build_dictionary(cfg: ExperimentConfig, seed: int) -> Dictionary:
    n = cfg.signal_n
    m = cfg.dict_m if cfg.dict_m is not None else n
    params = {}
    if cfg.dict_width is not None:
        params["width"] = cfg.dict_width
    if cfg.dict_convention is not None:
        params["convention"] = cfg.dict_convention
    kind = cfg.dict_kind
    dict_seed = seed if kind == "gaussian" else None
    return make_dictionary(kind, m, n, params=params or None, seed=dict_seed)


def _phase_jitter_ensemble(x: np.ndarray, trials: int, seed) -> np.ndarray:
    """Copies of |x| with fully redrawn phases; covariance ~ diag(|x|^2)."""
    rng = np.random.default_rng(seed)
    mags = np.abs(x)
    phases = rng.uniform(0.0, 2.0 * np.pi, (trials, x.size))
    return mags[None, :] * np.exp(1j * phases)


def _stop_kwargs(cfg: ExperimentConfig, k_true: int | None, n_opt: int, D: Dictionary) -> dict:
    stop = cfg.recover_stop
    if stop == "auto":
        if k_true is not None:
            return {"n": k_true}
        stop = "nopt"
    if stop == "nopt":
        return {"n": min(n_opt, D.m, D.n_atoms)}
    kind, _, arg = stop.partition(":")
    if kind == "dim":
        return {"n": int(arg)}
    if kind == "res":
        return {"epsilon": float(arg)}
    return {"max_iter": int(arg)}


def _top_indices(values: np.ndarray, k: int) -> frozenset:
    order = np.argsort(-np.abs(values), kind="stable")
    return frozenset(int(j) for j in order[:k])


def _least_squares_on(D: Dictionary, indices, y: np.ndarray) -> np.ndarray:
    idx = np.asarray(sorted(indices), dtype=np.intp)
    coeffs = np.zeros(D.n_atoms, dtype=np.complex128)
    if idx.size:
        sol, *_ = np.linalg.lstsq(D.atoms[:, idx], y, rcond=None)
        coeffs[idx] = sol
    return coeffs


def _run_trial(cfg: ExperimentConfig, trial: int, timings: bool) -> tuple[list[_TrialRow], dict]:
    seed = cfg.seed_base + trial
    k_true = None
    if cfg.signal_kind == "sparse":
        x, support = gen_sparse(cfg.signal_n, cfg.signal_k, seed)
        planted = frozenset(int(j) for j in support)
        k_true = cfg.signal_k
    elif cfg.signal_kind == "powerlaw":
        x, _ = gen_powerlaw(cfg.signal_n, cfg.signal_alpha, seed)
        planted = None
    else:
        x = ensemble_chirp(cfg.signal_components, cfg.signal_n, 1, jitter_seed=[seed, 2])[0]
        planted = None
    coefficient_truth = cfg.signal_kind != "chirp"

    D = _build_dictionary(cfg, seed)
    if coefficient_truth:
        y = forward(x, D, 0.0).values
    else:
        # the generated time series is the observation itself; the dictionary
        # is the synthesis frame it is analyzed against
        if D.m != x.size:
            raise ConfigError(0, "chirp experiments need dictionary.m == signal.n")
        y = x

    kothe = kothe_from_measurement(y, D)
    decomp = transition_point(
        kothe.sequence, criterion=cfg.criterion, epsilon=cfg.epsilon, window=cfg.window
    )
    shared = dict(
        n_opt=decomp.n,
        epsilon=decomp.epsilon,
        tail_mean=decomp.tail_mean,
        weak_l1=weak_l1_quasinorm(kothe.sequence),
    )
    truth = x if coefficient_truth else y
    truth_norm = float(np.linalg.norm(truth))

    rows = []
    for method in cfg.methods:
        row = _TrialRow(trial=trial, method=method, **shared)
        start = time.perf_counter()
        try:
            if method == "omp":
                result = omp_recover(y, D, **_stop_kwargs(cfg, k_true, decomp.n, D))
                estimate = result.reconstruction if coefficient_truth else D.atoms @ result.reconstruction
            elif method == "cskle":
                n_use = k_true if k_true is not None else max(min(decomp.n, D.m, x.size), 1)
                if coefficient_truth:
                    ensemble = _phase_jitter_ensemble(x, cfg.kle_ensemble, [seed, 1])
                    _, basis = cskle_basis(ensemble)
                    result = cskle_recover(y, D, basis, n_use)
                    estimate = result.reconstruction
                else:
                    ensemble = ensemble_chirp(
                        cfg.signal_components, cfg.signal_n, cfg.kle_ensemble, jitter_seed=[seed, 1]
                    )
                    _, basis = cskle_basis(ensemble)
                    eye = make_dictionary("identity", x.size, x.size)
                    result = cskle_recover(y, eye, basis, n_use)
                    estimate = result.reconstruction
            elif method == "oracle":
                if planted is not None:
                    idx = planted
                else:
                    k = max(min(decomp.n, D.m, D.n_atoms), 1)
                    if coefficient_truth:
                        idx = _top_indices(truth, k)
                    else:
                        idx = frozenset(int(j) for j in kothe.sequence.permutation[:k])
                coeffs = _least_squares_on(D, idx, y)
                estimate = coeffs if coefficient_truth else D.atoms @ coeffs
            else:
                raise ValueError(f"unknown method {method!r}")

            if truth_norm == 0.0:
                row.rel_err_l2 = 0.0
                row.rel_err_frechet = 0.0
            else:
                row.rel_err_l2 = float(np.linalg.norm(estimate - truth)) / truth_norm
                row.rel_err_frechet = frechet_metric(estimate, truth)
            if planted is not None:
                row.support_match = int(_top_indices(estimate, k_true) == planted)
        except (ValueError, np.linalg.LinAlgError) as exc:
            row.status = "error:" + str(exc).replace(",", ";").splitlines()[0]
            row.support_match = None
            row.rel_err_l2 = None
            row.rel_err_frechet = None
        if timings:
            row.runtime_ms = (time.perf_counter() - start) * 1e3
        rows.append(row)

    extras = {"rearranged": kothe.sequence.magnitudes, "n_opt": decomp.n}
    return rows, extras


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return fmt_float(value)


def _results_lines(cfg: ExperimentConfig, rows: list[_TrialRow]) -> list[str]:
    m = cfg.dict_m if cfg.dict_m is not None else cfg.signal_n
    lines = [RESULTS_HEADER]
    for row in rows:
        cells = [
            str(row.trial),
            row.method,
            row.status,
            str(cfg.signal_n),
            str(m),
            _cell(cfg.signal_k),
            _cell(row.n_opt),
            cfg.criterion,
            _cell(row.epsilon),
            _cell(row.support_match),
            _cell(row.rel_err_l2),
            _cell(row.rel_err_frechet),
            _cell(row.tail_mean),
            _cell(row.weak_l1),
            _cell(row.runtime_ms),
        ]
        lines.append(",".join(cells))
    return lines


def _summary_lines(cfg: ExperimentConfig, rows: list[_TrialRow]) -> list[str]:
    lines = [SUMMARY_HEADER]
    for method in cfg.methods:
        mrows = [r for r in rows if r.method == method]
        ok = [r for r in mrows if r.status == "ok"]
        success = [r for r in ok if r.support_match != 0]
        mean = lambda vals: (sum(vals) / len(vals)) if vals else None
        cells = [
            method,
            str(len(mrows)),
            fmt_float(len(success) / len(mrows)) if mrows else "",
            _cell(mean([r.n_opt for r in ok if r.n_opt is not None])),
            _cell(mean([r.rel_err_l2 for r in ok if r.rel_err_l2 is not None])),
            _cell(mean([r.rel_err_frechet for r in ok if r.rel_err_frechet is not None])),
            _cell(mean([r.runtime_ms for r in ok])),
        ]
        lines.append(",".join(cells))
    return lines


def run_experiment(
    cfg: ExperimentConfig,
    base_dir=".",
    timings: bool = False,
    svg: bool = False,
) -> tuple[Path, Path]:
    """Run all trials and write results.csv / summary.csv (and optionally an SVG).

    Per-trial seeds are seed_base + trial; with ``timings`` off (the default)
    output files are byte-identical across reruns.
    """
    _validate(cfg)
    out_dir = Path(base_dir) / cfg.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    rows: list[_TrialRow] = []
    first_extras = None
    for trial in range(cfg.trials):
        try:
            trial_rows, extras = _run_trial(cfg, trial, timings)
        except (ValueError, np.linalg.LinAlgError) as exc:
            message = "error:" + str(exc).replace(",", ";").splitlines()[0]
            trial_rows = [
                _TrialRow(trial=trial, method=method, status=message)
                for method in cfg.methods
            ]
            extras = None
        rows.extend(trial_rows)
        if first_extras is None and extras is not None:
            first_extras = extras

    results_path = out_dir / "results.csv"
    summary_path = out_dir / "summary.csv"
    results_path.write_text("\n".join(_results_lines(cfg, rows)) + "\n")
    summary_path.write_text("\n".join(_summary_lines(cfg, rows)) + "\n")
    if svg and first_extras is not None:
        line_chart(
            first_extras["rearranged"],
            out_dir / "rearranged.svg",
            marker=first_extras["n_opt"],
            title="rearranged correlation magnitudes",
        )
    return results_path, summary_path
