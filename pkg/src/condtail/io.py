"""File formats: dataset CSV, output tables, run manifests, simulation specs."""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
import platform
from pathlib import Path

import numpy as np

from .errors import DataError, SpecError
from .model import Dataset, DesignSpec, SimSpec


def read_dataset(path) -> Dataset:
    """Read a CSV with header ``x1,...,xp,y``.

    Rows with a missing, unparsable or non-positive ``y`` are rejected; the
    error lists their line numbers (the header is line 1).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        p = len(header) - 1
        expected = [f"x{j}" for j in range(1, p + 1)] + ["y"]
        if p < 1 or header != expected:
            raise DataError(f"{path}: header must be {','.join(expected) if p >= 1 else 'x1,...,xp,y'}; got {','.join(header)}")
        xs, ys, bad = [], [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != p + 1:
                bad.append(line_no)
                continue
            try:
                x = [float(c) for c in row[:p]]
                y = float(row[p]) if row[p].strip() else math.nan
            except ValueError:
                bad.append(line_no)
                continue
            if not (y > 0) or not all(math.isfinite(v) for v in x):
                bad.append(line_no)
                continue
            xs.append(x)
            ys.append(y)
    if bad:
        shown = ", ".join(str(b) for b in bad[:20])
        more = f" (+{len(bad) - 20} more)" if len(bad) > 20 else ""
        raise DataError(f"{path}: rejected rows with missing or non-positive y at lines {shown}{more}")
    if not ys:
        raise DataError(f"{path}: no data rows")
    return Dataset(np.array(xs, dtype=float).reshape(len(ys), p), np.array(ys))


def write_dataset(dataset: Dataset, path) -> None:
    rows = ([*map(repr, map(float, x)), repr(y)] for x, y in dataset.points())
    header = [f"x{j}" for j in range(1, dataset.p + 1)] + ["y"]
    write_rows(path, header, rows)


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if isinstance(v, (tuple, list)):
        return " ".join(_cell(u) for u in v)
    return "" if v is None else str(v)


def write_rows(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def write_table(path, records: list[dict], columns=None) -> None:
    if columns is None:
        columns = list(records[0].keys()) if records else []
    write_rows(path, columns, ([r.get(c) for c in columns] for r in records))


def read_table(path) -> list[dict]:
    """Read any CSV written by this package; numeric cells become floats."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        out = []
        for row in csv.DictReader(fh):
            rec = {}
            for key, val in row.items():
                try:
                    rec[key] = float(val)
                except (TypeError, ValueError):
                    rec[key] = val
            out.append(rec)
        return out


def manifest_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")


def write_manifest(out, command: str, args: dict, seed=None, outputs=()) -> Path:
    """Write ``<stem>.manifest.json`` next to ``out``.

    The manifest holds only inputs (flags, seed, versions), so reruns with
    the same inputs produce identical manifests.
    """
    import scipy

    from . import __version__

    data = {
        "command": command,
        "args": {k: v for k, v in sorted(args.items())},
        "seed": seed,
        "outputs": [str(o) for o in outputs] or [str(out)],
        "versions": {
            "condtail": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    path = manifest_path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------- sim specs

def _function(desc, field_name: str, p: int):
    """Build a covariate function from a JSON description.

    Accepted forms: a number (constant); ``{"type": "constant", "value"}``;
    ``{"type": "linear", "intercept", "slope": [...]}``;
    ``{"type": "sine", "mean", "amplitude", "period", "axis"}``.
    """
    if isinstance(desc, (int, float)) and not isinstance(desc, bool):
        v = float(desc)
        return lambda x: v
    if not isinstance(desc, dict) or "type" not in desc:
        raise SpecError(field_name, "must be a number or an object with a 'type'")
    kind = desc["type"]
    try:
        if kind == "constant":
            v = float(desc["value"])
            return lambda x: v
        if kind == "linear":
            a = float(desc["intercept"])
            slope = np.array(desc["slope"], dtype=float).ravel()
            if slope.size != p:
                raise SpecError(field_name, f"slope needs {p} entries")
            return lambda x: a + float(np.dot(slope, x))
        if kind == "sine":
            mean, amp = float(desc["mean"]), float(desc["amplitude"])
            period = float(desc.get("period", 1.0))
            axis = int(desc.get("axis", 0))
            if not 0 <= axis < p:
                raise SpecError(field_name, f"axis must be in [0, {p})")
            return lambda x: mean + amp * math.sin(2 * math.pi * x[axis] / period)
    except KeyError as exc:
        raise SpecError(field_name, f"missing key {exc.args[0]!r}") from None
    raise SpecError(field_name, f"unknown function type {kind!r}")


def _margin(desc, field_name):
    if desc is None or desc == "uniform":
        return lambda u: np.asarray(u, dtype=float)
    if isinstance(desc, dict) and "uniform" in desc:
        lo, hi = (float(v) for v in desc["uniform"])
        if not hi > lo:
            raise SpecError(field_name, "uniform margin needs lo < hi")
        return lambda u: lo + (hi - lo) * np.asarray(u, dtype=float)
    raise SpecError(field_name, "margin must be 'uniform' or {'uniform': [lo, hi]}")


def _design(desc) -> DesignSpec:
    if not isinstance(desc, dict):
        raise SpecError("design", "must be an object")
    kind = desc.get("type")
    if kind == "lattice":
        try:
            n, p = int(desc["n"]), int(desc.get("p", 1))
        except (KeyError, ValueError, TypeError):
            raise SpecError("design.n", "lattice needs an integer n") from None
        margins = desc.get("margins", ["uniform"] * p)
        if len(margins) != p:
            raise SpecError("design.margins", f"need {p} margins")
        from .model import lattice_side
        from .errors import NotAPerfectPower

        try:
            lattice_side(n, p)
        except NotAPerfectPower as exc:
            raise SpecError("design.n", str(exc)) from None
        return DesignSpec("lattice", n=n, p=p,
                          margins=tuple(_margin(m, f"design.margins[{j}]") for j, m in enumerate(margins)))
    if kind == "explicit":
        pts = desc.get("points")
        if not pts:
            raise SpecError("design.points", "explicit design needs a non-empty list of points")
        return DesignSpec("explicit", points=np.array(pts, dtype=float))
    raise SpecError("design.type", f"must be 'lattice' or 'explicit', got {kind!r}")


def parse_sim_spec(data: dict) -> SimSpec:
    """Validate a JSON simulation spec and build the corresponding SimSpec."""
    if not isinstance(data, dict):
        raise SpecError("spec", "must be a JSON object")
    family = data.get("family", "pareto")
    if family not in ("pareto", "burr"):
        raise SpecError("family", f"must be 'pareto' or 'burr', got {family!r}")
    design = _design(data.get("design"))
    p = design.p
    if "gamma" not in data:
        raise SpecError("gamma", "required")
    gamma_fn = _function(data["gamma"], "gamma", p)
    rho_fn = None
    if family == "burr":
        if "rho" not in data:
            raise SpecError("rho", "required for the burr family")
        rho_fn = _function(data["rho"], "rho", p)
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise SpecError("seed", "must be an integer in [0, 2^64)")
    spec = SimSpec(gamma_fn=gamma_fn, rho_fn=rho_fn, family=family, design=design, seed=seed,
                   meta=data)
    # check the parameter functions on the whole design up front
    from .simulate import _params

    _params(spec, design.covariates())
    return spec


def load_sim_spec(path) -> SimSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError("spec", f"invalid JSON: {exc}") from None
    return parse_sim_spec(data)


# ---------------------------------------------------------------- river data

def _parse_date(text: str):
    text = text.strip()
    for fmt in ("%Y-%m-%d", "%d/%m/%Y", "%Y/%m/%d"):
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            pass
    return None


def day_of_year_365(d: dt.date):
    """Day number 1..365 on a no-leap calendar; Feb 29 maps to None."""
    if d.month == 2 and d.day == 29:
        return None
    doy = d.timetuple().tm_yday
    if d.year % 4 == 0 and (d.year % 100 != 0 or d.year % 400 == 0) and d.month > 2:
        doy -= 1
    return doy


def convert_daily_flow(raw_path, out_path) -> dict:
    """Turn a ``date,flow`` CSV (e.g. an NRFA daily-flow export) into x1,x2,y.

    x1 = year, x2 = day of year on a 365-day calendar. Lines whose first
    field is not a date (metadata headers) are skipped; Feb 29 and
    non-positive or missing flows are dropped. Returns counts.
    """
    xs, ys = [], []
    counts = {"rows": 0, "leap_days": 0, "non_positive": 0, "skipped": 0}
    with Path(raw_path).open(newline="", encoding="utf-8-sig") as fh:
        for row in csv.reader(fh):
            if len(row) < 2:
                counts["skipped"] += 1
                continue
            d = _parse_date(row[0])
            if d is None:
                counts["skipped"] += 1
                continue
            try:
                y = float(row[1])
            except ValueError:
                counts["non_positive"] += 1
                continue
            doy = day_of_year_365(d)
            if doy is None:
                counts["leap_days"] += 1
                continue
            if not y > 0:
                counts["non_positive"] += 1
                continue
            xs.append((d.year, doy))
            ys.append(y)
    if not ys:
        raise DataError(f"{raw_path}: no usable date,flow rows")
    ds = Dataset(np.array(xs, dtype=float), np.array(ys))
    write_dataset(ds, out_path)
    counts["rows"] = ds.n
    return counts
