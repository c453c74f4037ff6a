"""Plain-text CSV exchange format for curves, sweeps and fit reports.

Layout::

    # biphoton-hom v1
    # method=quad,xi=0.0,zeta=1.5707963267948966,...
    tau,R_mean,R_stderr
    -5e-09,0.5000414350703432,0.0
    ...

Floats are written with ``repr`` (shortest string that parses back to the
same double), so ``read_csv(write_csv(c))`` is bit-exact.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .analysis import FitResult
from .correlation import CorrelationCurve, XiSweep

MAGIC = "# biphoton-hom v1"
CURVE_HEADER = "tau,R_mean,R_stderr"
XI_HEADER = "xi,R_mean,R_stderr"
NOON_HEADER = "phi,R"
FIT_KEYS = ("b", "a", "c", "rms_residual", "converged", "iterations")


class CsvFormatError(ValueError):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    s = str(v)
    if any(ch in s for ch in ",=\n\r"):
        raise ValueError(f"metadata value {s!r} may not contain ',', '=' or newlines")
    return s


def _parse_value(s: str):
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _meta_line(meta: dict) -> str:
    return "# " + ",".join(f"{k}={_fmt(v)}" for k, v in meta.items())


def _write(dest, meta: dict, header: str, rows) -> None:
    # dest: a filesystem path or an open text stream
    lines = [MAGIC, _meta_line(meta), header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
        return
    with open(dest, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_curve(curve: CorrelationCurve, path) -> None:
    rows = zip(curve.tau_grid.tolist(), curve.r_mean.tolist(), curve.r_stderr.tolist())
    _write(path, curve.meta, CURVE_HEADER, rows)


def write_xi_sweep(sweep: XiSweep, path) -> None:
    rows = zip(sweep.xi_grid.tolist(), sweep.r_mean.tolist(), sweep.r_stderr.tolist())
    _write(path, sweep.meta, XI_HEADER, rows)


def write_noon(phi, r, n: int, path) -> None:
    rows = zip(np.asarray(phi, dtype=float).tolist(), np.asarray(r, dtype=float).tolist())
    _write(path, {"method": "noon", "n": int(n)}, NOON_HEADER, rows)


def write_fit(fit: FitResult, path, meta: dict | None = None) -> None:
    row = [getattr(fit, k) for k in FIT_KEYS]
    _write(path, {"method": "fit", **(meta or {})}, ",".join(FIT_KEYS), [row])


def write_csv(obj, path, **kwargs) -> None:
    """Dispatch on the object type (curve, xi sweep or fit result)."""
    if isinstance(obj, CorrelationCurve):
        write_curve(obj, path)
    elif isinstance(obj, XiSweep):
        write_xi_sweep(obj, path)
    elif isinstance(obj, FitResult):
        write_fit(obj, path, **kwargs)
    else:
        raise TypeError(f"cannot write {type(obj).__name__} as CSV")


def read_csv(path) -> CorrelationCurve:
    """Read a ``tau,R_mean,R_stderr`` file; every ``#`` line is skipped.

    Metadata is recovered from the ``key=value`` comment line that follows
    the format marker, when present.
    """
    text = Path(path).read_text(encoding="utf-8")
    meta: dict = {}
    header_seen = False
    taus, means, errs = [], [], []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if lineno == 2 and "=" in body:
                for item in body.split(","):
                    key, sep, value = item.partition("=")
                    if not sep:
                        raise CsvFormatError(f"line {lineno}: malformed metadata item {item!r}")
                    meta[key.strip()] = _parse_value(value.strip())
            continue
        if not header_seen:
            if line.strip() != CURVE_HEADER:
                raise CsvFormatError(
                    f"line {lineno}: expected header {CURVE_HEADER!r}, got {line.strip()!r}")
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise CsvFormatError(f"line {lineno}: expected 3 fields, got {len(fields)}")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise CsvFormatError(f"line {lineno}: non-numeric field in {line!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise CsvFormatError(f"line {lineno}: non-finite value in {line!r}")
        if taus and not values[0] > taus[-1]:
            raise CsvFormatError(f"line {lineno}: tau values must be strictly increasing")
        taus.append(values[0])
        means.append(values[1])
        errs.append(values[2])
    if not header_seen:
        raise CsvFormatError(f"{path}: no {CURVE_HEADER!r} header found")
    return CorrelationCurve(np.array(taus), np.array(means), np.array(errs), meta)
