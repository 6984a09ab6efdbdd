"""Text wire formats: signal, support, measurement, and ensemble files.

All numbers serialize as decimal text with 17 significant digits so values
round-trip float64 bit-exactly. Complex samples are one ``re,im`` pair per
line under a one-line header.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .operators import Measurement
from .validation import check_samples, check_signal

__all__ = [
    "FileFormatError",
    "fmt_float",
    "write_signal",
    "read_signal",
    "write_support",
    "read_support",
    "write_measurement",
    "read_measurement",
    "write_ensemble",
    "read_ensemble",
]

SIGNAL_MAGIC = "# ctvs-signal v1"
SUPPORT_MAGIC = "# ctvs-support v1"
MEASUREMENT_MAGIC = "# ctvs-measurement v1"
ENSEMBLE_MAGIC = "# ctvs-ensemble v1"


class FileFormatError(ValueError):
    """Malformed file; carries the 1-based line number."""

    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def _fmt_complex(z: complex) -> str:
    return f"{fmt_float(z.real)},{fmt_float(z.imag)}"


def _parse_complex(path, line_no: int, line: str) -> complex:
    parts = line.split(",")
    if len(parts) != 2:
        raise FileFormatError(path, line_no, f"expected 're,im', got {line!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise FileFormatError(path, line_no, f"bad number in {line!r}") from None


def _read_lines(path) -> list[str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(path, 0, str(exc)) from None
    return text.splitlines()


def _header_fields(path, lines: list[str], magic: str) -> dict[str, str]:
    if not lines or not lines[0].startswith(magic):
        raise FileFormatError(path, 1, f"missing header {magic!r}")
    fields = {}
    for token in lines[0][len(magic):].split():
        if "=" not in token:
            raise FileFormatError(path, 1, f"bad header token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    return fields


def _header_int(path, fields: dict, key: str) -> int:
    try:
        return int(fields[key])
    except KeyError:
        raise FileFormatError(path, 1, f"header missing {key}=") from None
    except ValueError:
        raise FileFormatError(path, 1, f"header {key}= must be an integer") from None


def _read_complex_block(path, lines, start: int, count: int) -> np.ndarray:
    if len(lines) - start != count:
        raise FileFormatError(
            path, len(lines), f"expected {count} sample lines, found {len(lines) - start}"
        )
    values = np.empty(count, dtype=np.complex128)
    for i in range(count):
        values[i] = _parse_complex(path, start + i + 1, lines[start + i].strip())
    return values


def write_signal(path, values) -> None:
    values = check_signal(values)
    lines = [f"{SIGNAL_MAGIC} N={values.size}"]
    lines.extend(_fmt_complex(z) for z in values)
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal(path) -> np.ndarray:
    lines = _read_lines(path)
    fields = _header_fields(path, lines, SIGNAL_MAGIC)
    n = _header_int(path, fields, "N")
    return _read_complex_block(path, lines, 1, n)


def write_support(path, support) -> None:
    support = np.asarray(support, dtype=np.intp)
    lines = [f"{SUPPORT_MAGIC} K={support.size}"]
    lines.extend(str(int(j)) for j in support)
    Path(path).write_text("\n".join(lines) + "\n")


def read_support(path) -> np.ndarray:
    lines = _read_lines(path)
    fields = _header_fields(path, lines, SUPPORT_MAGIC)
    k = _header_int(path, fields, "K")
    if len(lines) - 1 != k:
        raise FileFormatError(path, len(lines), f"expected {k} index lines")
    out = np.empty(k, dtype=np.intp)
    for i in range(k):
        try:
            out[i] = int(lines[1 + i].strip())
        except ValueError:
            raise FileFormatError(path, i + 2, f"bad index {lines[1 + i]!r}") from None
    return out


def write_measurement(path, meas: Measurement, dict_spec: dict) -> None:
    """Measurement values plus the recipe to regenerate the dictionary.

    ``dict_spec`` needs kind/m/n_atoms and optionally seed plus scalar params;
    params serialize as p_<name>=<value> header tokens.
    """
    values = meas.values
    tokens = [
        f"{MEASUREMENT_MAGIC} M={values.size}",
        f"dict={dict_spec['kind']}",
        f"dict_m={int(dict_spec['m'])}",
        f"dict_atoms={int(dict_spec['n_atoms'])}",
        f"dict_seed={dict_spec.get('seed', 'none')}",
        f"noise_sigma={fmt_float(meas.noise_sigma)}",
    ]
    for key, value in sorted(dict_spec.get("params", {}).items()):
        tokens.append(f"p_{key}={value}")
    lines = [" ".join(tokens)]
    lines.extend(_fmt_complex(z) for z in values)
    Path(path).write_text("\n".join(lines) + "\n")


def read_measurement(path) -> tuple[np.ndarray, dict]:
    """Returns (values, dict_spec) with dict_spec keys kind/m/n_atoms/seed/params/noise_sigma."""
    lines = _read_lines(path)
    fields = _header_fields(path, lines, MEASUREMENT_MAGIC)
    m = _header_int(path, fields, "M")
    values = _read_complex_block(path, lines, 1, m)
    for key in ("dict", "dict_m", "dict_atoms"):
        if key not in fields:
            raise FileFormatError(path, 1, f"header missing {key}=")
    seed_text = fields.get("dict_seed", "none")
    params = {}
    for key, value in fields.items():
        if key.startswith("p_"):
            try:
                params[key[2:]] = float(value)
            except ValueError:
                params[key[2:]] = value
    spec = {
        "kind": fields["dict"],
        "m": _header_int(path, fields, "dict_m"),
        "n_atoms": _header_int(path, fields, "dict_atoms"),
        "seed": None if seed_text == "none" else int(seed_text),
        "noise_sigma": float(fields.get("noise_sigma", "0")),
        "params": params,
    }
    return values, spec


def write_ensemble(path, samples) -> None:
    X = check_samples(samples)
    lines = [f"{ENSEMBLE_MAGIC} T={X.shape[0]} N={X.shape[1]}"]
    for row in X:
        lines.extend(_fmt_complex(z) for z in row)
    Path(path).write_text("\n".join(lines) + "\n")


def read_ensemble(path) -> np.ndarray:
    lines = _read_lines(path)
    fields = _header_fields(path, lines, ENSEMBLE_MAGIC)
    t = _header_int(path, fields, "T")
    n = _header_int(path, fields, "N")
    flat = _read_complex_block(path, lines, 1, t * n)
    return flat.reshape(t, n)
