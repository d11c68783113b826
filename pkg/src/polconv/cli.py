"""Command-line front end.

    polconv pipeline --xi 1 --eta 1+i
    polconv sweep --range xi_R=-2:2:41 --range eta_I=-2:2:41 --fix eta_R=1 --fix xi_I=-1
    polconv wigner --state quad --alpha i
    polconv qparam --abs 0:5:51 --phase 0:3.141592653589793:5
    polconv homodyne --state coherent --alpha 1 --count 100000 --seed 7

Exit codes: 0 ok, 2 usage/parse error, 3 truncation-unsafe, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .fock import TruncationError, partial_trace_y
from .homodyne import quadrature_marginal, sample, validate_moments, radon_projection
from .metrics import (
    _photon_moments,
    compute_metrics,
    mandel_q,
    mandel_q_quad_superposition,
    negativity_closed_form,
    wigner_numeric,
)
from .optics import ClosedFormPsi3, PipelineInput, run_pipeline
from .states import coherent, quad_superposition

EXIT_OK, EXIT_USAGE, EXIT_TRUNCATION, EXIT_VALIDATION = 0, 2, 3, 4

DEFAULT_TOLERANCES = {
    "negativity": 1e-6,
    "schmidt": 1e-9,
    "mandel_q": 1e-8,
    "fidelity": 1e-8,
    "field": 1e-8,
}

BEAM = ("xi_R", "xi_I", "eta_R", "eta_I")
MODE_SYMBOLS = {
    "pipeline": BEAM,
    "sweep-negativity-schmidt": BEAM,
    "wigner": ("x", "y", "alpha_R", "alpha_I") + BEAM,
    "qparam": ("abs_alpha", "phi"),
    "homodyne": ("alpha_R", "alpha_I", "theta") + BEAM,
}
COMMAND_MODE = {
    "pipeline": "pipeline",
    "sweep": "sweep-negativity-schmidt",
    "wigner": "wigner",
    "qparam": "qparam",
    "homodyne": "homodyne",
}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers

_COMPLEX_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style numbers: ``1.5``, ``i``, ``-2i``, ``1-0.5i``, ``3e-1+2i``."""
    s = str(text).strip().replace(" ", "").replace("j", "i")
    if not s:
        raise UsageError("empty complex number")
    if not s.endswith("i"):
        if not _COMPLEX_RE.match(s):
            raise UsageError(f"cannot parse complex number {text!r}")
        return complex(float(s), 0.0)
    body = s[:-1]
    # split at the last sign that is not an exponent sign
    cut = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    re_part, im_part = (body[:cut], body[cut:]) if cut is not None else ("", body)
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    for part in (re_part, im_part):
        if part and not _COMPLEX_RE.match(part):
            raise UsageError(f"cannot parse complex number {text!r}")
    return complex(float(re_part) if re_part else 0.0, float(im_part))


def parse_range(text: str) -> tuple:
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, v, 1
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise UsageError(f"range must be min:max:steps, got {text!r}") from None
    return lo, hi, steps


def axis(lo: float, hi: float, steps: int) -> np.ndarray:
    return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])


def fmt(x) -> str:
    """Fixed 12-significant-digit text for CSV cells and delta strings."""
    if x is None:
        return ""
    return format(float(x), ".12g")


def num(x):
    """JSON number rounded to 12 significant digits (None passes through)."""
    if x is None:
        return None
    v = float(format(float(x), ".12g"))
    return 0.0 if v == 0 else v


def cnum(z) -> list:
    z = complex(z)
    return [num(z.real), num(z.imag)]


# ---------------------------------------------------------------------------
# config


@dataclass
class SweepConfig:
    mode: str
    ranges: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    cutoff: Optional[int] = None
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    output: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict) or "mode" not in data:
            raise UsageError("config needs a 'mode'")
        mode = data["mode"]
        if mode not in MODE_SYMBOLS:
            raise UsageError(f"unknown mode {mode!r}")
        ranges = {}
        for name, spec in (data.get("ranges") or {}).items():
            if isinstance(spec, str):
                spec = parse_range(spec)
            if isinstance(spec, dict):
                spec = (spec.get("min"), spec.get("max"), spec.get("steps"))
            try:
                lo, hi, steps = float(spec[0]), float(spec[1]), int(spec[2])
            except (TypeError, ValueError, IndexError):
                raise UsageError(f"bad range for {name!r}") from None
            ranges[name] = (lo, hi, steps)
        fixed = {k: float(v) for k, v in (data.get("fixed") or {}).items()}
        cfg = cls(
            mode=mode,
            ranges=ranges,
            fixed=fixed,
            cutoff=data.get("cutoff"),
            tolerances=dict(data.get("tolerances") or {}),
            seed=int(data.get("seed", 0)),
            output=dict(data.get("output") or {}),
            options={k: v for k, v in data.items()
                     if k not in ("mode", "ranges", "fixed", "cutoff", "tolerances", "seed", "output")},
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        allowed = MODE_SYMBOLS[self.mode]
        for name, (lo, hi, steps) in self.ranges.items():
            if name not in allowed:
                raise UsageError(f"symbol {name!r} is not part of mode {self.mode!r}")
            if steps < 1 or lo > hi:
                raise UsageError(f"range for {name!r} needs steps >= 1 and min <= max")
        for name in self.fixed:
            if name not in allowed:
                raise UsageError(f"symbol {name!r} is not part of mode {self.mode!r}")
        if self.cutoff is not None and int(self.cutoff) < 2:
            raise UsageError("cutoff must be >= 2")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise UsageError(f"unknown tolerance keys {sorted(unknown)}")


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    return SweepConfig.from_dict(data)


# ---------------------------------------------------------------------------
# output


def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# state selection


def beam_from(values: dict) -> PipelineInput:
    return PipelineInput(complex(values.get("xi_R", 0.0), values.get("xi_I", 0.0)),
                         complex(values.get("eta_R", 0.0), values.get("eta_I", 0.0)))


def select_state(kind: str, alpha: complex, beam: PipelineInput, cutoff: Optional[int]):
    """Density matrix for ``coherent``, ``quad`` or ``psi3-x``, plus a JSON description."""
    if kind == "coherent":
        st = coherent(alpha, cutoff)
        return st.density_matrix(), {"state": kind, "alpha": cnum(alpha), "cutoff": st.dims[0]}
    if kind == "quad":
        st, _ = quad_superposition(alpha, cutoff)
        return st.density_matrix(), {"state": kind, "alpha": cnum(alpha), "cutoff": st.dims[0]}
    if kind == "psi3-x":
        res = run_pipeline(beam, cutoff)
        rho = partial_trace_y(res.psi3.density_matrix())
        return rho, {"state": kind, "xi": cnum(beam.xi), "eta": cnum(beam.eta), "cutoff": res.cutoff,
                     "mu_x": cnum(res.closed_form.mu_x)}
    raise UsageError(f"unknown state {kind!r}")


# ---------------------------------------------------------------------------
# commands


def _tolerances(cfg: Optional[SweepConfig]) -> dict:
    tol = dict(DEFAULT_TOLERANCES)
    if cfg is not None:
        tol.update({k: float(v) for k, v in cfg.tolerances.items()})
    return tol


def pipeline_report(inp: PipelineInput, cutoff: Optional[int]) -> dict:
    rep = compute_metrics(inp, cutoff)
    cf = rep.closed_form
    s = rep.schmidt
    schmidt = None
    if s is not None:
        schmidt = {
            "theta": num(s.theta),
            "phi_x": num(s.phi_x),
            "phi_y": num(s.phi_y),
            "delta_phi": num(s.delta_phi),
            "K_closed": num(s.k_closed),
            "K_eigen": num(s.k_eigen),
            "delta": fmt(s.k_delta),
        }
    return {
        "command": "pipeline",
        "inputs": {"xi": cnum(inp.xi), "eta": cnum(inp.eta)},
        "cutoff": rep.cutoff,
        "closed_form": {"mu_x": cnum(cf.mu_x), "mu_y": cnum(cf.mu_y), "xi_R": num(cf.xi_r),
                        "N": num(cf.norm), "r": num(cf.r)},
        "negativity": {"closed": num(rep.negativity_closed), "numeric": num(rep.negativity_numeric),
                       "delta": fmt(rep.negativity_delta)},
        "schmidt": schmidt,
        "mandel_q": {"numeric": num(rep.mandel_q), "closed": num(rep.mandel_q_closed),
                     "delta": fmt(rep.mandel_q_delta)},
        "field": {
            "abs_mu_x": num(abs(cf.mu_x)), "phi_x": num(np.angle(cf.mu_x)),
            "abs_mu_y": num(abs(cf.mu_y)), "phi_y": num(np.angle(cf.mu_y)), "r": num(cf.r),
            "a_x_closed": cnum(rep.field_closed[0]), "a_y_closed": cnum(rep.field_closed[1]),
            "a_x_numeric": cnum(rep.field_numeric[0]), "a_y_numeric": cnum(rep.field_numeric[1]),
            "delta": fmt(rep.field_delta),
        },
        "psi3": {"fidelity_closed_form": num(rep.psi3_fidelity), "delta": fmt(1 - rep.psi3_fidelity),
                 "tail_mass": num(rep.tail_mass)},
        "warnings": list(rep.warnings),
    }


def strict_failures(report: dict, tol: dict) -> list:
    checks = [("negativity", report["negativity"]["delta"]),
              ("mandel_q", report["mandel_q"]["delta"]),
              ("field", report["field"]["delta"]),
              ("fidelity", report["psi3"]["delta"])]
    if report.get("schmidt"):
        checks.append(("schmidt", report["schmidt"]["delta"]))
    return [k for k, d in checks if d != "" and float(d) > tol[k]]


def cmd_pipeline(args, cfg) -> int:
    values = dict(cfg.fixed) if cfg else {}
    xi = parse_complex(args.xi) if args.xi is not None else complex(values.get("xi_R", 0), values.get("xi_I", 0))
    eta = parse_complex(args.eta) if args.eta is not None else complex(values.get("eta_R", 0), values.get("eta_I", 0))
    report = pipeline_report(PipelineInput(xi, eta), args.cutoff)
    tol = _tolerances(cfg)
    failures = strict_failures(report, tol)
    report["strict"] = {"enabled": bool(args.strict), "failures": failures}
    if args.format == "csv":
        flat = _flatten(report)
        emit(to_csv(list(flat), [[_cell(v) for v in flat.values()]]), args.out)
    else:
        emit(to_json(report), args.out)
    return EXIT_VALIDATION if args.strict and failures else EXIT_OK


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = ";".join(_cell(x) for x in v)
        else:
            out[key] = v
    return out


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, list):
        return ";".join(_cell(x) for x in v)
    return str(v)


SWEEP_COLUMNS = ("negativity_closed", "negativity_numeric", "K", "mandel_q",
                 "negativity_delta", "K_delta", "mandel_q_delta", "error")


def sweep_point(task) -> dict:
    """One grid point of the negativity/Schmidt sweep (runs in worker processes)."""
    values, cutoff, numeric = task
    inp = beam_from(values)
    cf = ClosedFormPsi3.from_input(inp)
    row = {"negativity_closed": negativity_closed_form(cf.xi_r)}
    try:
        rep = compute_metrics(inp, cutoff, numeric=numeric)
    except TruncationError as exc:
        row["error"] = f"truncation: {exc}"
        return row
    if rep.schmidt is not None:
        row["K"], row["K_delta"] = rep.schmidt.k_closed, rep.schmidt.k_delta
    row["negativity_numeric"] = rep.negativity_numeric
    row["negativity_delta"] = rep.negativity_delta
    row["mandel_q"], row["mandel_q_delta"] = rep.mandel_q, rep.mandel_q_delta
    row["error"] = "; ".join(rep.warnings)
    return row


def grid_points(cfg: SweepConfig) -> tuple:
    symbols = [s for s in MODE_SYMBOLS[cfg.mode] if s in cfg.ranges]
    axes = [axis(*cfg.ranges[s]) for s in symbols]
    pts = []
    for combo in product(*axes):
        v = dict(cfg.fixed)
        v.update(zip(symbols, (float(c) for c in combo)))
        pts.append(v)
    return symbols, pts


def cmd_sweep(args, cfg) -> int:
    cfg = _merge_ranges(args, cfg, "sweep-negativity-schmidt")
    numeric = not args.no_numeric and bool(cfg.options.get("numeric", True))
    cutoff = args.cutoff if args.cutoff is not None else cfg.cutoff
    symbols, pts = grid_points(cfg)
    tasks = [(p, cutoff, numeric) for p in pts]
    workers = args.workers or int(cfg.options.get("workers", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [sweep_point(t) for t in tasks]
    tol = _tolerances(cfg)
    failed = False
    for r in rows:
        for col, key in (("negativity_delta", "negativity"), ("K_delta", "schmidt"), ("mandel_q_delta", "mandel_q")):
            if r.get(col) is not None and r[col] > tol[key]:
                failed = True
    header = list(symbols) + list(SWEEP_COLUMNS)
    if args.format == "json":
        payload = [dict({s: num(p[s]) for s in symbols}, **{c: _json_cell(c, r.get(c)) for c in SWEEP_COLUMNS})
                   for p, r in zip(pts, rows)]
        emit(to_json(payload), args.out)
    else:
        body = [[fmt(p[s]) for s in symbols] + [r.get(c, "") if c == "error" else fmt(r.get(c)) for c in SWEEP_COLUMNS]
                for p, r in zip(pts, rows)]
        emit(to_csv(header, body), args.out)
    return EXIT_VALIDATION if args.strict and failed else EXIT_OK


def _json_cell(column: str, value):
    if column == "error":
        return value or ""
    if column.endswith("_delta"):
        return fmt(value)
    return num(value)


def _merge_ranges(args, cfg: Optional[SweepConfig], mode: str) -> SweepConfig:
    data = {"mode": mode, "ranges": dict(cfg.ranges) if cfg else {}, "fixed": dict(cfg.fixed) if cfg else {}}
    for spec in getattr(args, "range", None) or []:
        name, _, rng = spec.partition("=")
        data["ranges"][name.strip()] = parse_range(rng)
    for spec in getattr(args, "fix", None) or []:
        name, _, val = spec.partition("=")
        try:
            data["fixed"][name.strip()] = float(val)
        except ValueError:
            raise UsageError(f"bad --fix value {spec!r}") from None
    merged = SweepConfig.from_dict(data)
    if cfg:
        merged.cutoff, merged.tolerances, merged.seed = cfg.cutoff, cfg.tolerances, cfg.seed
        merged.output, merged.options = cfg.output, cfg.options
    return merged


def _state_args(args, cfg):
    values = dict(cfg.fixed) if cfg else {}
    opts = cfg.options if cfg else {}
    kind = args.state or opts.get("state", "quad")
    if args.alpha is not None:
        alpha = parse_complex(args.alpha)
    else:
        alpha = complex(values.get("alpha_R", 0.0), values.get("alpha_I", 0.0))
    xi = parse_complex(args.xi) if args.xi is not None else complex(values.get("xi_R", 0), values.get("xi_I", 0))
    eta = parse_complex(args.eta) if args.eta is not None else complex(values.get("eta_R", 0), values.get("eta_I", 0))
    cutoff = args.cutoff if args.cutoff is not None else (cfg.cutoff if cfg else None)
    return kind, alpha, PipelineInput(xi, eta), cutoff


def cmd_wigner(args, cfg) -> int:
    kind, alpha, beam, cutoff = _state_args(args, cfg)
    rho, desc = select_state(kind, alpha, beam, cutoff)
    steps = args.resolution or int((cfg.options.get("resolution") if cfg else None) or 41)
    if args.window:
        try:
            x0, x1, y0, y1 = (float(v) for v in args.window.split(":"))
        except ValueError:
            raise UsageError("window must be xmin:xmax:ymin:ymax") from None
        xr, yr = (x0, x1, steps), (y0, y1, steps)
    elif cfg and "x" in cfg.ranges and "y" in cfg.ranges:
        xr, yr = cfg.ranges["x"], cfg.ranges["y"]
    else:
        c = {"coherent": alpha, "quad": alpha}.get(kind, ClosedFormPsi3.from_input(beam).mu_x)
        xr = (c.real - 3, c.real + 3, steps)
        yr = (c.imag - 3, c.imag + 3, steps)
    grid = wigner_numeric(rho, axis(*xr), axis(*yr))
    summary = {"min": num(grid.min), "max": num(grid.max), "integral": num(grid.integral),
               "argmin": cnum(grid.argmin)}
    if args.format == "json":
        emit(to_json({"command": "wigner", "source": desc, "x": [num(v) for v in grid.xvec],
                      "y": [num(v) for v in grid.yvec],
                      "values": [[num(v) for v in row] for row in grid.values], "summary": summary}), args.out)
    else:
        header = ["y\\x"] + [fmt(v) for v in grid.xvec]
        rows = [[fmt(y)] + [fmt(v) for v in row] for y, row in zip(grid.yvec, grid.values)]
        emit(to_csv(header, rows), args.out)
    sys.stderr.write(f"min={fmt(grid.min)} max={fmt(grid.max)} integral={fmt(grid.integral)}\n")
    if args.image:
        _render(grid, args.image)
    return EXIT_OK


def _render(grid, path: str) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("--image needs matplotlib") from None
    fig, ax = plt.subplots(figsize=(5, 4))
    m = ax.pcolormesh(grid.xvec, grid.yvec, grid.values, cmap="RdBu_r", shading="auto",
                      vmin=-2 / math.pi, vmax=2 / math.pi)
    ax.set_xlabel("X1")
    ax.set_ylabel("X2")
    fig.colorbar(m, ax=ax, label="W")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_qparam(args, cfg) -> int:
    ranges = dict(cfg.ranges) if cfg else {}
    if args.abs:
        ranges["abs_alpha"] = parse_range(args.abs)
    if args.phase:
        ranges["phi"] = parse_range(args.phase)
    ranges.setdefault("abs_alpha", (0.0, 5.0, 51))
    ranges.setdefault("phi", (0.0, math.pi, 5))
    qcfg = SweepConfig.from_dict({"mode": "qparam", "ranges": ranges})
    cutoff = args.cutoff if args.cutoff is not None else (cfg.cutoff if cfg else None)
    rows = []
    for mag in axis(*qcfg.ranges["abs_alpha"]):
        for phi in axis(*qcfg.ranges["phi"]):
            alpha = complex(mag * math.cos(phi), mag * math.sin(phi))
            st, _ = quad_superposition(alpha, cutoff)
            mean, second = _photon_moments(st)
            q = mandel_q(st)
            qc = mandel_q_quad_superposition(alpha)
            rows.append([fmt(mag), fmt(phi), fmt(mean), fmt(second - mean ** 2), fmt(q), fmt(qc), fmt(abs(q - qc))])
    header = ["abs_alpha", "phi", "mean_n", "var_n", "mandel_q", "mandel_q_closed", "mandel_q_delta"]
    emit(to_csv(header, rows), args.out)
    tol = _tolerances(cfg)["mandel_q"]
    bad = any(float(r[-1]) > tol for r in rows)
    return EXIT_VALIDATION if args.strict and bad else EXIT_OK


def cmd_homodyne(args, cfg) -> int:
    kind, alpha, beam, cutoff = _state_args(args, cfg)
    opts = cfg.options if cfg else {}
    count = args.count if args.count is not None else int(opts.get("count", 100000))
    if count < 1:
        raise UsageError("count must be positive")
    seed = args.seed if args.seed is not None else (cfg.seed if cfg else 0)
    theta = args.theta if args.theta is not None else float((cfg.fixed if cfg else {}).get("theta", 0.0))
    rho, desc = select_state(kind, alpha, beam, cutoff)
    marg = quadrature_marginal(rho, theta)
    batch = sample(marg, seed, count)
    rep = validate_moments(batch, rho)
    out = {
        "command": "homodyne",
        "source": desc,
        "theta": num(theta),
        "seed": int(seed),
        "count": count,
        "sample_mean": num(rep.mean),
        "sample_variance": num(rep.variance),
        "analytic_mean": num(rep.analytic_mean),
        "analytic_variance": num(rep.analytic_variance),
        "z_mean": num(rep.z_mean),
        "z_variance": num(rep.z_variance),
        "normalization_defect": fmt(marg.normalization_defect),
        "passed": rep.passed,
    }
    if args.radon_check:
        xs = np.linspace(rep.analytic_mean - 3, rep.analytic_mean + 3, 61)
        delta = np.max(np.abs(radon_projection(rho, theta, xs) - np.interp(xs, marg.x, marg.density)))
        out["radon_delta"] = fmt(delta)
    emit(to_json(out), args.out)
    return EXIT_OK if rep.passed else EXIT_VALIDATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--cutoff", type=int, help="Fock cutoff per mode")
    common.add_argument("--seed", type=int)
    common.add_argument("--strict", action="store_true", help="nonzero exit when a delta exceeds tolerance")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", choices=("coherent", "quad", "psi3-x"))
    state.add_argument("--alpha", help="displacement, a+bi syntax")
    state.add_argument("--xi", help="x-polarization amplitude (psi3-x)")
    state.add_argument("--eta", help="y-polarization amplitude (psi3-x)")

    p = argparse.ArgumentParser(prog="polconv", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pipeline", parents=[common], help="run one input beam end to end")
    sp.add_argument("--xi")
    sp.add_argument("--eta")
    sp.set_defaults(func=cmd_pipeline, default_format="json")

    sp = sub.add_parser("sweep", parents=[common], help="negativity / Schmidt-number grid")
    sp.add_argument("--range", action="append", metavar="SYM=min:max:steps")
    sp.add_argument("--fix", action="append", metavar="SYM=value")
    sp.add_argument("--no-numeric", action="store_true", help="skip the brute-force negativity")
    sp.add_argument("--workers", type=int, default=0)
    sp.set_defaults(func=cmd_sweep, default_format="csv")

    sp = sub.add_parser("wigner", parents=[common, state], help="Wigner function on a grid")
    sp.add_argument("--window", metavar="xmin:xmax:ymin:ymax")
    sp.add_argument("--resolution", type=int)
    sp.add_argument("--image", help="optional heatmap (needs matplotlib)")
    sp.set_defaults(func=cmd_wigner, default_format="csv")

    sp = sub.add_parser("qparam", parents=[common], help="Mandel Q over |alpha| and phase")
    sp.add_argument("--abs", metavar="min:max:steps")
    sp.add_argument("--phase", metavar="min:max:steps")
    sp.set_defaults(func=cmd_qparam, default_format="csv")

    sp = sub.add_parser("homodyne", parents=[common, state], help="sample homodyne quadratures")
    sp.add_argument("--theta", type=float, help="local-oscillator phase")
    sp.add_argument("--count", type=int)
    sp.add_argument("--radon-check", action="store_true")
    sp.set_defaults(func=cmd_homodyne, default_format="json")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is not None and cfg.mode != COMMAND_MODE[args.command]:
            raise UsageError(f"config mode {cfg.mode!r} does not match command {args.command!r}")
        if args.format is None:
            args.format = (cfg.output.get("format") if cfg else None) or args.default_format
        if args.out is None and cfg is not None:
            args.out = cfg.output.get("path")
        return args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"polconv: error: {exc}\n")
        return EXIT_USAGE
    except TruncationError as exc:
        sys.stderr.write(f"polconv: truncation-unsafe: {exc}\n")
        return EXIT_TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
