"""Scenario configuration and the runners behind the command line.

Configs are flat UTF-8 ``key=value`` text with dotted section prefixes::

    model.n_qubits=1
    model.nbar=50
    initial.kind=ground
    time.stop=50
    time.steps=5000

Blank lines and ``#`` comments are ignored.  A JSON sidecar written next to
an output file is also accepted: its ``resolved_config`` block reproduces
the run exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .attractor import BasinParameter, attractor_state, basin_state, characteristic_times
from .engine import build_propagator, evolve, evolve_series
from .errors import BasinOutOfRange, ConfigError, CutoffTooSmall
from .hilbert import (
    TRUNCATION_TOL,
    ModelParams,
    QubitPureState,
    coherent_field_amps,
    dicke_state,
    spin_coherent,
    symmetric_product,
)
from .observables import (
    entropy,
    field_grid,
    field_q_function,
    mixed_tangle,
    pure_tangle,
    reduce_qubits,
    sphere_grid,
    spin_q_function,
    state_probability,
    symmetric_to_two_qubit,
)

THREADS_ENV = "CAVREVIVE_THREADS"

INITIAL_KINDS = ("ground", "basin", "attractor", "spin_coherent", "custom_dicke")
OBSERVABLES = ("p_initial", "p_attractor_plus", "p_attractor_minus", "entropy", "tangle", "leakage")
DEFAULT_OBSERVABLES = ("p_initial", "p_attractor_plus", "entropy")

_KIND_KEYS = {
    "ground": (),
    "basin": ("a_re", "a_im"),
    "attractor": ("sign",),
    "spin_coherent": ("beta_re", "beta_im"),
    "custom_dicke": ("amplitudes",),
}

_KNOWN_KEYS = {
    "model.n_qubits",
    "model.nbar",
    "model.theta",
    "model.lambda",
    "model.omega",
    "model.fock_cutoff",
    "initial.kind",
    "time.start",
    "time.stop",
    "time.steps",
    "output.path",
    "output.format",
    "qfunc.time",
    "qfunc.kind",
    "qfunc.grid",
    "qfunc.extent",
    "scan.samples",
}
_KNOWN_KEYS |= {f"initial.{k}" for keys in _KIND_KEYS.values() for k in keys}
_KNOWN_KEYS |= {f"observables.{k}" for k in OBSERVABLES}


# -- parsing -------------------------------------------------------------------


def parse_config_text(text):
    """Parse ``key=value`` lines into a dict of strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ConfigError(f"{key}: given more than once")
        out[key] = value
    return out


def load_config(path):
    """Read a config file (``key=value`` text or a JSON sidecar)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        mapping = doc.get("resolved_config")
        if not isinstance(mapping, dict):
            raise ConfigError(f"{path}: JSON config needs a 'resolved_config' object")
        return config_from_mapping({k: str(v) for k, v in mapping.items()})
    return config_from_mapping(parse_config_text(text))


def _get(mapping, key, conv, default=None, required=False):
    if key not in mapping:
        if required:
            raise ConfigError(f"{key}: required")
        return default
    raw = mapping[key]
    try:
        return conv(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None


def _bool(s):
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(s)


def _int(s):
    f = float(s)
    if f != int(f):
        raise ValueError(s)
    return int(f)


def _complex_list(s):
    return [complex(tok.strip().replace(" ", "")) for tok in str(s).split(",") if tok.strip()]


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully validated experiment description."""

    model: ModelParams
    initial_kind: str = "ground"
    initial: dict = field(default_factory=dict)
    start: float = 0.0
    stop: float = 0.0
    steps: int = 1
    observables: tuple = DEFAULT_OBSERVABLES
    output_path: str | None = None
    output_format: str = "csv"
    qfunc_time: float | None = None
    qfunc_kind: str = "field"
    qfunc_grid: int | None = None
    qfunc_extent: float = 1.6
    scan_samples: int = 50

    def times(self):
        return np.linspace(self.start, self.stop, self.steps)


def config_from_mapping(mapping):
    """Validate a flat string mapping into a :class:`ScenarioConfig`."""
    unknown = sorted(set(mapping) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key")
    nq = _get(mapping, "model.n_qubits", _int, required=True)
    nbar = _get(mapping, "model.nbar", float, required=True)
    cutoff = _get(mapping, "model.fock_cutoff", _int)
    try:
        model = ModelParams(
            n_qubits=nq,
            nbar=nbar,
            coupling=_get(mapping, "model.lambda", float, 1.0),
            theta=_get(mapping, "model.theta", float, 0.0),
            omega=_get(mapping, "model.omega", float, 1.0),
            fock_cutoff=cutoff,
        )
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from None

    kind = mapping.get("initial.kind", "ground")
    if kind not in INITIAL_KINDS:
        raise ConfigError(f"initial.kind: must be one of {', '.join(INITIAL_KINDS)}, got {kind!r}")
    for other, keys in _KIND_KEYS.items():
        if other == kind:
            continue
        for k in keys:
            if f"initial.{k}" in mapping and k not in _KIND_KEYS[kind]:
                raise ConfigError(f"initial.{k}: not a parameter of initial.kind={kind}")
    initial = {}
    if kind == "basin":
        initial["a_re"] = _get(mapping, "initial.a_re", float, 0.0)
        initial["a_im"] = _get(mapping, "initial.a_im", float, 0.0)
    elif kind == "attractor":
        sign = mapping.get("initial.sign", "+").strip()
        if sign not in ("+", "-", "+1", "-1", "1"):
            raise ConfigError(f"initial.sign: must be + or -, got {sign!r}")
        initial["sign"] = "-" if sign.startswith("-") else "+"
    elif kind == "spin_coherent":
        initial["beta_re"] = _get(mapping, "initial.beta_re", float, 0.0)
        initial["beta_im"] = _get(mapping, "initial.beta_im", float, 0.0)
    elif kind == "custom_dicke":
        amps = _get(mapping, "initial.amplitudes", _complex_list, required=True)
        if len(amps) != nq + 1:
            raise ConfigError(f"initial.amplitudes: need {nq + 1} Dicke amplitudes, got {len(amps)}")
        norm = math.sqrt(sum(abs(c) ** 2 for c in amps))
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"initial.amplitudes: norm {norm!r} is not 1 (amplitudes are never renormalized)")
        initial["amplitudes"] = tuple(amps)

    start = _get(mapping, "time.start", float, 0.0)
    stop = _get(mapping, "time.stop", float, start)
    steps = _get(mapping, "time.steps", _int, 1)
    if steps < 1:
        raise ConfigError("time.steps: must be >= 1")
    if not stop >= start:
        raise ConfigError("time.stop: must be >= time.start")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError("time: start and stop must be finite")

    if any(k.startswith("observables.") for k in mapping):
        flags = tuple(o for o in OBSERVABLES if _get(mapping, f"observables.{o}", _bool, False))
    else:
        flags = DEFAULT_OBSERVABLES
    if "tangle" in flags and nq != 2:
        raise ConfigError("observables.tangle: only defined for model.n_qubits=2")

    fmt = mapping.get("output.format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: must be csv or json, got {fmt!r}")
    qkind = mapping.get("qfunc.kind", "field")
    if qkind not in ("field", "spin"):
        raise ConfigError(f"qfunc.kind: must be field or spin, got {qkind!r}")
    qgrid = _get(mapping, "qfunc.grid", _int)
    if qgrid is not None and qgrid < 2:
        raise ConfigError("qfunc.grid: must be >= 2")
    samples = _get(mapping, "scan.samples", _int, 50)
    if samples < 2:
        raise ConfigError("scan.samples: must be >= 2")

    cfg = ScenarioConfig(
        model=model,
        initial_kind=kind,
        initial=initial,
        start=start,
        stop=stop,
        steps=steps,
        observables=flags,
        output_path=mapping.get("output.path"),
        output_format=fmt,
        qfunc_time=_get(mapping, "qfunc.time", float),
        qfunc_kind=qkind,
        qfunc_grid=qgrid,
        qfunc_extent=_get(mapping, "qfunc.extent", float, 1.6),
        scan_samples=samples,
    )
    initial_qubit_state(cfg)  # surfaces basin/normalization errors at load time
    return cfg


def resolved_mapping(cfg):
    """Flat mapping with every default made explicit (input to :func:`config_from_mapping`)."""
    m = cfg.model
    out = {
        "model.n_qubits": str(m.n_qubits),
        "model.nbar": repr(float(m.nbar)),
        "model.theta": repr(float(m.theta)),
        "model.lambda": repr(float(m.coupling)),
        "model.omega": repr(float(m.omega)),
        "model.fock_cutoff": str(m.fock_cutoff),
        "initial.kind": cfg.initial_kind,
    }
    for k, v in cfg.initial.items():
        if k == "amplitudes":
            out["initial.amplitudes"] = ",".join(repr(complex(c)).strip("()") for c in v)
        elif k == "sign":
            out["initial.sign"] = v
        else:
            out[f"initial.{k}"] = repr(float(v))
    out["time.start"] = repr(float(cfg.start))
    out["time.stop"] = repr(float(cfg.stop))
    out["time.steps"] = str(cfg.steps)
    for o in OBSERVABLES:
        out[f"observables.{o}"] = "true" if o in cfg.observables else "false"
    if cfg.output_path is not None:
        out["output.path"] = cfg.output_path
    out["output.format"] = cfg.output_format
    if cfg.qfunc_time is not None:
        out["qfunc.time"] = repr(float(cfg.qfunc_time))
    out["qfunc.kind"] = cfg.qfunc_kind
    if cfg.qfunc_grid is not None:
        out["qfunc.grid"] = str(cfg.qfunc_grid)
    out["qfunc.extent"] = repr(float(cfg.qfunc_extent))
    out["scan.samples"] = str(cfg.scan_samples)
    return out


# -- building blocks -------------------------------------------------------------


def initial_qubit_state(cfg):
    m = cfg.model
    kind, p = cfg.initial_kind, cfg.initial
    try:
        if kind == "ground":
            return dicke_state(m.n_qubits, 0)
        if kind == "basin":
            return basin_state(BasinParameter(complex(p["a_re"], p["a_im"]), m.n_qubits, m.theta))
        if kind == "attractor":
            return attractor_state(p["sign"], m.theta, m.n_qubits)
        if kind == "spin_coherent":
            return spin_coherent(complex(p["beta_re"], p["beta_im"]), m.n_qubits)
        amps = np.array(p["amplitudes"], dtype=complex)
        return QubitPureState(m.n_qubits, amps / np.linalg.norm(amps))
    except BasinOutOfRange as exc:
        raise ConfigError(f"initial.a_re/a_im: {exc}") from None


def initial_state(cfg):
    m = cfg.model
    field_amps = coherent_field_amps(m.nbar, m.theta, m.fock_cutoff)
    return symmetric_product(initial_qubit_state(cfg), field_amps)


def thread_count():
    """Worker cap from ``CAVREVIVE_THREADS``; default ``min(4, cpu_count)``."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return max(1, min(4, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(f"{THREADS_ENV}: must be a positive integer, got {raw!r}")
    return n


@dataclass
class Table:
    """Column-named numeric table plus metadata for the JSON sidecar."""

    columns: list
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        return self.rows[:, self.columns.index(name)]


def _fmt(x):
    x = float(x)
    if x == 0.0:
        return "0.0"  # folds -0.0
    return repr(x)


def table_to_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def table_to_json(table):
    doc = {"columns": list(table.columns), "rows": [[float(_fmt(x)) for x in row] for row in table.rows]}
    return json.dumps(doc, indent=1) + "\n"


def write_table(table, path, fmt):
    """Write ``table`` to ``path`` and its metadata to ``path + '.meta.json'``."""
    text = table_to_csv(table) if fmt == "csv" else table_to_json(table)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(table.metadata, indent=1, sort_keys=True) + "\n")
    return path


def _times_meta(model):
    try:
        return characteristic_times(model).as_dict()
    except ValueError:
        return None


# -- runners ---------------------------------------------------------------------


def run_evolve(cfg):
    """Time series of the requested observables, one row per time point.

    Raises :class:`CutoffTooSmall` when any evolved state leaks
    ``>= 1e-8`` into the top of the Fock space.
    """
    m = cfg.model
    psi0 = initial_state(cfg)
    q0 = initial_qubit_state(cfg)
    times = cfg.times()
    prop = build_propagator(m)
    att_p = attractor_state(1, m.theta, m.n_qubits)
    att_m = attractor_state(-1, m.theta, m.n_qubits)
    columns = ["t", *cfg.observables]
    rows = np.empty((times.size, len(columns)))
    worst = 0.0
    for i, (t, psi) in enumerate(zip(times, evolve_series(prop, psi0, times))):
        rho = reduce_qubits(psi)
        leak = psi.leakage()
        worst = max(worst, leak)
        rows[i, 0] = t
        for j, name in enumerate(cfg.observables, start=1):
            if name == "p_initial":
                rows[i, j] = state_probability(psi, q0)
            elif name == "p_attractor_plus":
                rows[i, j] = state_probability(psi, att_p)
            elif name == "p_attractor_minus":
                rows[i, j] = state_probability(psi, att_m)
            elif name == "entropy":
                rows[i, j] = entropy(rho)
            elif name == "tangle":
                rows[i, j] = mixed_tangle(symmetric_to_two_qubit(rho))
            else:
                rows[i, j] = leak
    if worst >= TRUNCATION_TOL:
        raise CutoffTooSmall(f"evolved state leaks {worst:.3e} at n_max={m.fock_cutoff}", leakage=worst)
    ct = _times_meta(m)
    meta = {
        "command": "evolve",
        "resolved_config": resolved_mapping(cfg),
        "fock_cutoff": m.fock_cutoff,
        "max_leakage": worst,
        "characteristic_times": ct,
        "time_unit": "1/lambda",
    }
    if ct:
        meta["t_over_t_revival"] = [cfg.start / ct["t_revival"], cfg.stop / ct["t_revival"]]
    if m.n_qubits == 2:
        meta["initial_pure_tangle"] = pure_tangle(q0)
    return Table(columns, rows, meta)


def run_qfunc(cfg, t=None, kind=None, grid=None):
    """Field or spin Q function of the evolved state at one time."""
    m = cfg.model
    t = cfg.qfunc_time if t is None else t
    if t is None:
        raise ConfigError("qfunc.time: required (or pass --time)")
    if not math.isfinite(t):
        raise ConfigError("qfunc.time: must be finite")
    kind = kind or cfg.qfunc_kind
    grid = grid or cfg.qfunc_grid
    psi = evolve(build_propagator(m), initial_state(cfg), t)
    radial_scale = math.sqrt(m.nbar)
    if kind == "field":
        n = grid or 201
        q = field_q_function(psi, field_grid(m.nbar, n, cfg.qfunc_extent), radial_scale=radial_scale)
        pts = q.points.ravel()
        rows = np.column_stack([pts.real, pts.imag, q.values.ravel()])
        columns = ["re_beta", "im_beta", "Q"]
    elif kind == "spin":
        n = grid or 181
        q = spin_q_function(reduce_qubits(psi), sphere_grid(n, 2 * n - 1))
        rows = np.column_stack([q.points[0].ravel(), q.points[1].ravel(), q.values.ravel()])
        columns = ["theta_s", "phi_s", "Q_s"]
    else:
        raise ConfigError(f"qfunc.kind: must be field or spin, got {kind!r}")
    meta = {
        "command": "qfunc",
        "resolved_config": resolved_mapping(cfg),
        "time": float(t),
        "kind": kind,
        "grid": n,
        "radial_scale": radial_scale,
        "fock_cutoff": m.fock_cutoff,
        "characteristic_times": _times_meta(m),
    }
    return Table(columns, rows, meta)


def run_times(model):
    """Characteristic times as a JSON-ready dict."""
    out = characteristic_times(model).as_dict()
    out.update(coupling=model.coupling, nbar=model.nbar, n_qubits=model.n_qubits)
    return out


def basin_samples(n_qubits, samples):
    """Admissible ``a`` values covering the basin disc.

    The first points are the anchors ``a = r``, ``r/sqrt(2)``, ``0`` (the two
    cat states and, for two qubits, the zero-tangle point ``a = 1/2``); the
    remainder are sunflower points filling the disc.
    """
    r = 2.0 ** ((1 - n_qubits) / 2)
    anchors = [complex(r), complex(r / math.sqrt(2)), 0j]
    pts = anchors[:samples]
    k = samples - len(pts)
    golden = math.pi * (3 - math.sqrt(5))
    for i in range(k):
        rad = r * math.sqrt((i + 0.5) / k)
        pts.append(rad * complex(math.cos(i * golden), math.sin(i * golden)))
    return pts


def run_basin_scan(n_qubits, nbar, theta=0.0, samples=50, coupling=1.0, threads=None):
    """Initial tangle, attractor probability and entropy at ``t*`` across the basin."""
    if samples < 2:
        raise ConfigError("scan.samples: must be >= 2")
    model = ModelParams(n_qubits=n_qubits, nbar=nbar, theta=theta, coupling=coupling)
    prop = build_propagator(model)
    t_star = characteristic_times(model).t_attractor
    field_amps = coherent_field_amps(nbar, theta, model.fock_cutoff)
    att = attractor_state(1, theta, n_qubits)

    def one(a):
        q = basin_state(BasinParameter(a, n_qubits, theta))
        psi = evolve(prop, symmetric_product(q, field_amps), t_star)
        tau = pure_tangle(q) if n_qubits == 2 else float("nan")
        return [a.real, a.imag, tau, state_probability(psi, att), entropy(reduce_qubits(psi))]

    pts = basin_samples(n_qubits, samples)
    with ThreadPoolExecutor(max_workers=threads or thread_count()) as pool:
        rows = np.array(list(pool.map(one, pts)))
    meta = {
        "command": "basin-scan",
        "n_qubits": n_qubits,
        "nbar": float(nbar),
        "theta": float(theta),
        "samples": samples,
        "t_attractor": t_star,
        "fock_cutoff": model.fock_cutoff,
    }
    return Table(["a_re", "a_im", "tau", "p_attractor_plus", "entropy"], rows, meta)
