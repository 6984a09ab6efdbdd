"""Command-line surface: gen, sense, dimension, recover, experiment, oracle.

Exit codes: 0 success, 2 validation error (bad flags, malformed files, bad
config), 1 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .experiment import ConfigError, parse_config, run_experiment
from .frechet import frechet_metric, kothe_from_measurement
from .measure import transition_point
from .oracles import run_default_grid
from .rearrangement import rearrange
from .recovery import cskle_basis, cskle_recover, forward, omp_recover
from .signals import ChirpComponent, ensemble_chirp, gen_chirp, gen_powerlaw, gen_sparse, make_dictionary
from .svgplot import line_chart

__all__ = ["main", "build_parser"]


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="base random seed")
    parser.add_argument("--out", type=str, default=None, help="output file or directory")
    parser.add_argument("--svg", action="store_true", help="also write an SVG chart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cskit",
        description="compressibility measurement and sparse recovery toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a signal file")
    _common_flags(p)
    p.add_argument("--kind", required=True, choices=("sparse", "powerlaw", "chirp"))
    p.add_argument("--n", type=int, required=True, help="signal length")
    p.add_argument("--k", type=int, help="sparsity (sparse)")
    p.add_argument("--alpha", type=float, help="decay exponent (powerlaw)")
    p.add_argument(
        "--components",
        type=str,
        help="chirp components amp:freq[:rate], comma separated",
    )
    p.add_argument("--trials", type=int, default=1, help="chirp: emit a phase-jittered ensemble")

    p = sub.add_parser("sense", help="measure a signal file through a dictionary")
    _common_flags(p)
    p.add_argument("--signal", required=True, help="input signal file")
    p.add_argument("--dict-kind", default="gaussian", choices=("gaussian", "dft", "gabor", "identity"))
    p.add_argument("--m", type=int, help="measurement count (default: signal length)")
    p.add_argument("--width", type=float, help="gabor window width")
    p.add_argument("--convention", choices=("synthesis", "analysis"), help="dft convention")
    p.add_argument("--noise-sigma", type=float, default=0.0)

    p = sub.add_parser("dimension", help="estimate the optimum dimension of a measurement")
    _common_flags(p)
    p.add_argument("--input", required=True, help="measurement or signal file")
    p.add_argument("--criterion", default="frechet-increment", choices=("frechet-increment", "tail-mean"))
    p.add_argument("--epsilon", type=float, default=None, help="transition tolerance (default auto)")
    p.add_argument("--window", type=int, default=3)

    p = sub.add_parser("recover", help="recover coefficients from a measurement file")
    _common_flags(p)
    p.add_argument("--input", required=True, help="measurement file")
    p.add_argument("--method", default="omp", choices=("omp", "cskle"))
    p.add_argument("--stop", default=None, help="dim:<int> | res:<float> | iter:<int>")
    p.add_argument("--ensemble", help="cskle: ensemble file for the covariance basis")
    p.add_argument("--truth", help="optional signal file with the true coefficients")

    p = sub.add_parser("experiment", help="run a config-driven experiment")
    _common_flags(p)
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument(
        "--timings",
        action="store_true",
        help="record wall-clock runtime_ms (breaks byte-reproducibility of the CSVs)",
    )

    p = sub.add_parser("oracle", help="brute-force verification of library outputs")
    _common_flags(p)
    p.add_argument("--task", required=True, choices=("borel", "besterm", "transition"))

    return parser


def _parse_components_flag(text: str) -> list[ChirpComponent]:
    comps = []
    for part in text.split(","):
        fields = [float(f) for f in part.strip().split(":")]
        if len(fields) not in (2, 3):
            raise ValueError(f"component must be amp:freq[:rate], got {part!r}")
        comps.append(ChirpComponent(*fields))
    return comps


def _cmd_gen(args) -> int:
    out = Path(args.out or "signal.txt")
    if args.kind == "sparse":
        if args.k is None:
            raise ValueError("--kind sparse needs --k")
        values, support = gen_sparse(args.n, args.k, args.seed)
        fileio.write_signal(out, values)
        fileio.write_support(out.with_suffix(out.suffix + ".support"), support)
        print(f"wrote {out} support={','.join(str(int(j)) for j in support)}")
    elif args.kind == "powerlaw":
        if args.alpha is None:
            raise ValueError("--kind powerlaw needs --alpha")
        values, tail_bound = gen_powerlaw(args.n, args.alpha, args.seed)
        fileio.write_signal(out, values)
        print(f"wrote {out} tail_bound={fileio.fmt_float(tail_bound)}")
    else:
        if not args.components:
            raise ValueError("--kind chirp needs --components")
        comps = _parse_components_flag(args.components)
        if args.trials > 1:
            samples = ensemble_chirp(comps, args.n, args.trials, jitter_seed=args.seed)
            fileio.write_ensemble(out, samples)
            print(f"wrote {out} trials={args.trials}")
        else:
            fileio.write_signal(out, gen_chirp(comps, args.n))
            print(f"wrote {out}")
    return 0


def _dictionary_from_spec(spec: dict):
    return make_dictionary(
        spec["kind"], spec["m"], spec["n_atoms"], params=spec.get("params") or None,
        seed=spec.get("seed"),
    )


def _cmd_sense(args) -> int:
    x = fileio.read_signal(args.signal)
    m = args.m if args.m is not None else x.size
    params = {}
    if args.width is not None:
        params["width"] = args.width
    if args.convention is not None:
        params["convention"] = args.convention
    D = make_dictionary(
        args.dict_kind, m, x.size, params=params or None,
        seed=args.seed if args.dict_kind == "gaussian" else None,
    )
    meas = forward(x, D, noise_sigma=args.noise_sigma, seed=args.seed)
    out = Path(args.out or "measurement.txt")
    fileio.write_measurement(
        out,
        meas,
        {"kind": D.kind, "m": D.m, "n_atoms": D.n_atoms, "seed": D.seed, "params": D.params},
    )
    print(f"wrote {out} dict={D.ref}")
    return 0


def _load_sequence(path):
    """Measurement file -> Koethe sequence; signal file -> direct rearrangement."""
    head = Path(path).read_text().splitlines()[:1]
    if head and head[0].startswith(fileio.MEASUREMENT_MAGIC):
        values, spec = fileio.read_measurement(path)
        D = _dictionary_from_spec(spec)
        return kothe_from_measurement(values, D).sequence, (values, D)
    return rearrange(fileio.read_signal(path)), None


def _cmd_dimension(args) -> int:
    sequence, _ = _load_sequence(args.input)
    decomp = transition_point(
        sequence, criterion=args.criterion, epsilon=args.epsilon, window=args.window
    )
    print(
        f"n={decomp.n} tail_mean={fileio.fmt_float(decomp.tail_mean)} "
        f"criterion={decomp.criterion}"
    )
    if args.svg:
        chart = Path(args.out) if args.out else Path(args.input).with_suffix(".svg")
        line_chart(
            sequence.magnitudes, chart, marker=decomp.n,
            title="rearranged magnitudes",
        )
        print(f"wrote {chart}")
    return 0


def _parse_stop(text: str | None) -> dict:
    if text is None:
        return {}
    kind, _, arg = text.partition(":")
    try:
        if kind == "dim":
            return {"n": int(arg)}
        if kind == "res":
            return {"epsilon": float(arg)}
        if kind == "iter":
            return {"max_iter": int(arg)}
    except ValueError:
        pass
    raise ValueError(f"--stop must be dim:<int>|res:<float>|iter:<int>, got {text!r}")


def _cmd_recover(args) -> int:
    values, spec = fileio.read_measurement(args.input)
    D = _dictionary_from_spec(spec)
    stop = _parse_stop(args.stop)
    if args.method == "omp":
        result = omp_recover(values, D, **stop)
    else:
        if not args.ensemble:
            raise ValueError("--method cskle needs --ensemble")
        samples = fileio.read_ensemble(args.ensemble)
        _, basis = cskle_basis(samples)
        n = stop.get("n")
        if n is None:
            raise ValueError("--method cskle needs --stop dim:<n>")
        result = cskle_recover(values, D, basis, n)
    out = Path(args.out or "recovered.txt")
    fileio.write_signal(out, result.reconstruction)
    support = ",".join(str(int(j)) for j in sorted(result.support))
    print(f"wrote {out} method={result.method} iterations={result.iterations} support={support}")
    if args.truth:
        x = fileio.read_signal(args.truth)
        xnorm = float(np.linalg.norm(x))
        rel = 0.0 if xnorm == 0 else float(np.linalg.norm(result.reconstruction - x)) / xnorm
        print(
            f"rel_err_l2={fileio.fmt_float(rel)} "
            f"rel_err_frechet={fileio.fmt_float(frechet_metric(result.reconstruction, x))}"
        )
    return 0


def _cmd_experiment(args) -> int:
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        raise fileio.FileFormatError(path, 0, str(exc)) from None
    cfg = parse_config(text)
    results, summary = run_experiment(
        cfg, base_dir=args.out or ".", timings=args.timings, svg=args.svg
    )
    print(f"wrote {results}")
    print(f"wrote {summary}")
    return 0


def _cmd_oracle(args) -> int:
    cases = run_default_grid(args.task)
    mismatches = 0
    for case in cases:
        print(f"{case.verdict} {case.name}: {case.detail}")
        mismatches += not case.matched
    print(f"{len(cases) - mismatches}/{len(cases)} cases match")
    return 0 if mismatches == 0 else 1


_COMMANDS = {
    "gen": _cmd_gen,
    "sense": _cmd_sense,
    "dimension": _cmd_dimension,
    "recover": _cmd_recover,
    "experiment": _cmd_experiment,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the validation code
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (fileio.FileFormatError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures exit 1 per contract
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
