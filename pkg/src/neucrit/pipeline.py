"""End-to-end orchestration: spectrum, constants, three truncated mountain
passes, homotopy bound, reduction, degree ledger, and the conditional
multistart that hunts for whatever the deficiency says is still missing.

Reports are plain dicts assembled from per-stage outputs, JSON-ready and
deterministic for a fixed config + seed (timings excluded, they are wall
clock).  Stage failures are recorded and the run continues wherever later
stages can still make sense; config errors abort.
"""

from __future__ import annotations

import copy
import json
import math
import time

import numpy as np

from ._version import __version__
from .energy import EnergyFunctional
from .errors import ConfigError, NeucritError
from .ledger import (
    DegreeLedger,
    LedgerConfig,
    qualitative_classify,
    transfer_to_original,
)
from .nonlinearity import build_nonlinearity, check_hypotheses, truncate
from .records import SolverConfig
from .reduction import make_reduction_context, maximize_reduced
from .solvers import (
    dedup_records,
    find_constants,
    homotopy_bound,
    mountain_pass,
    multistart,
)
from .spectrum import Domain, build_spectrum, split_spectrum

__all__ = [
    "SCHEMA_VERSION",
    "STAGES",
    "reference_config",
    "validate_config",
    "run_pipeline",
    "RunReport",
]

SCHEMA_VERSION = 1

STAGES = (
    "constants",
    "truncation_below",
    "truncation_above",
    "truncation_interval",
    "homotopy",
    "reduction",
    "ledger",
    "multistart",
)

_MULTISTART_CHUNK = 50


def reference_config() -> dict:
    """The five-zero instance on [0, pi]: slopes 2.5 at the crossing zeros
    -2, 0, 2 and -3 at the wells -1, 1, asymptotically linear with slope
    2.5 (between the second and third eigenvalues, so k = 2)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "modes": 16,
        "domain": {"kind": "interval", "lengths": [math.pi], "quad_points": 512},
        "nonlinearity": {
            "knots": [[-2.0, 2.5], [-1.0, -3.0], [0.0, 2.5], [1.0, -3.0], [2.0, 2.5]],
            "slope_minus_inf": 2.5,
            "slope_plus_inf": 2.5,
            "blend_margin": 1.0,
        },
        "solver": {"rng_seed": 7},
        "stages": "all",
    }


_SECTION_KEYS = {
    "domain": {"kind", "lengths", "quad_points"},
    "nonlinearity": {"knots", "slope_minus_inf", "slope_plus_inf",
                     "shape_points", "blend_margin"},
    "solver": {"grad_tol", "max_iters", "path_nodes", "dedup_radius",
               "multistart_budget", "rng_seed", "mp_offset", "safety_factor",
               "degeneracy_tol", "simplicity_tol", "lambda_count",
               "homotopy_budget", "homotopy_start_radius"},
    "reduction": {"inner_tol", "max_inner", "grid_radius"},
    "ledger": {"degeneracy_tol", "simplicity_tol", "qual_tol", "range_margin",
               "dedup_radius"},
    "output": {"dir"},
}


def validate_config(config: dict) -> dict:
    """Normalize and type-check a config dict.  Raises ConfigError."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    known_top = {"schema_version", "modes", "domain", "nonlinearity", "solver",
                 "reduction", "ledger", "output", "stages"}
    unknown = set(config) - known_top
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = copy.deepcopy(config)
    if cfg.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {cfg.get('schema_version')}")
    cfg["schema_version"] = SCHEMA_VERSION

    for name in ("domain", "nonlinearity"):
        if name not in cfg or not isinstance(cfg[name], dict):
            raise ConfigError(f"missing required section {name!r}")
    for name, keys in _SECTION_KEYS.items():
        sec = cfg.get(name)
        if sec is None:
            continue
        if not isinstance(sec, dict):
            raise ConfigError(f"section {name!r} must be an object")
        bad = set(sec) - keys
        if bad:
            raise ConfigError(f"unknown keys in section {name!r}: {sorted(bad)}")

    try:
        modes = int(cfg.get("modes", 16))
    except (TypeError, ValueError):
        raise ConfigError("modes must be an integer")
    if modes < 2:
        raise ConfigError("modes must be at least 2")
    cfg["modes"] = modes

    dom = cfg["domain"]
    if dom.get("kind") not in ("interval", "rectangle"):
        raise ConfigError("domain.kind must be 'interval' or 'rectangle'")
    lengths = dom.get("lengths")
    if not isinstance(lengths, (list, tuple)) or not lengths:
        raise ConfigError("domain.lengths must be a non-empty list")
    qp = dom.get("quad_points")
    if qp is not None:
        per_axis = modes
        if int(qp) < 4 * per_axis:
            raise ConfigError(
                f"quad_points={qp} is below the anti-aliasing floor {4 * per_axis}"
            )

    nl = cfg["nonlinearity"]
    knots = nl.get("knots")
    if not isinstance(knots, (list, tuple)) or not knots:
        raise ConfigError("nonlinearity.knots must be a non-empty list of [t, slope]")
    for kn in knots:
        if not isinstance(kn, (list, tuple)) or len(kn) != 2:
            raise ConfigError(f"bad knot entry {kn!r}")
    for key in ("slope_minus_inf", "slope_plus_inf"):
        if key not in nl:
            raise ConfigError(f"nonlinearity.{key} is required")

    stages = cfg.get("stages", "all")
    if stages == "all":
        cfg["stages"] = list(STAGES)
    else:
        if not isinstance(stages, (list, tuple)):
            raise ConfigError("stages must be 'all' or a list of stage names")
        bad = [s for s in stages if s not in STAGES]
        if bad:
            raise ConfigError(f"unknown stages: {bad}; known: {list(STAGES)}")
        cfg["stages"] = list(stages)

    try:
        SolverConfig(**cfg.get("solver", {}))
        LedgerConfig(**cfg.get("ledger", {}))
    except TypeError as e:
        raise ConfigError(f"bad solver/ledger section: {e}")
    return cfg


def _jsonable(obj):
    """Deep-copy into JSON-safe types; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


class RunReport:
    """Structured pipeline output with JSON/CSV/SVG emission."""

    def __init__(self, config):
        self.config = config
        self.hypotheses = None
        self.stages = {}
        self.skips = {}
        self.errors = {}
        self.timings = {}
        self.warnings = []
        self.ledger = None          # DegreeLedger instance
        self.ledger_report = None   # LedgerReport after the last reconcile
        self.spectrum = None
        self.functional = None
        self.records = []           # live CriticalPointRecord objects

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def deficiency(self):
        return None if self.ledger_report is None else self.ledger_report.deficiency

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "config": self.config,
            "hypotheses": self.hypotheses.to_dict() if self.hypotheses else None,
            "stages": self.stages,
            "skips": self.skips,
            "errors": self.errors,
            "warnings": list(self.warnings),
            "ledger": None,
            "timings": self.timings,
        }
        if self.ledger is not None:
            out["ledger"] = self.ledger.to_json_dict(self.ledger_report)
        return _jsonable(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, out_dir) -> list:
        """Emit report.json, summary.csv and (intervals only) profiles.svg.
        Returns the paths written."""
        import os

        from .plots import render_profiles

        os.makedirs(out_dir, exist_ok=True)
        paths = []
        p = os.path.join(out_dir, "report.json")
        with open(p, "w") as fh:
            fh.write(self.to_json())
        paths.append(p)
        if self.ledger is not None:
            p = os.path.join(out_dir, "summary.csv")
            with open(p, "w") as fh:
                fh.write(self.ledger.to_csv())
            paths.append(p)
        if self.spectrum is not None and self.spectrum.domain.ndim == 1 and self.records:
            p = os.path.join(out_dir, "profiles.svg")
            with open(p, "w") as fh:
                fh.write(render_profiles(self.spectrum, self.records))
            paths.append(p)
        return paths


def _min_type_zeros(f):
    return sorted(t for t, s in f.zeros() if s < 0)


def _truncation_stage(report, kind, anchors, scfg, transfer_cfg, range_margin):
    """One truncated mountain pass plus the transfer back.  Returns the
    transferred record or None (error recorded on the report)."""
    stage = f"truncation_{kind}"
    func = report.functional
    spec = report.spectrum
    try:
        g = truncate(func.nonlinearity, kind, *anchors)
        tfunc = EnergyFunctional(spec, g)
        if kind == "below":
            a = spec.constant_field(anchors[0])
            b = spec.constant_field(anchors[0] - scfg.mp_offset)
        elif kind == "above":
            a = spec.constant_field(anchors[0])
            b = spec.constant_field(anchors[0] + scfg.mp_offset)
        else:
            a = spec.constant_field(anchors[0])
            b = spec.constant_field(anchors[1])
        rec = mountain_pass(tfunc, a, b, scfg)
        rec.provenance.update({"stage": stage, "kind": kind,
                               "anchors": [float(x) for x in anchors]})
        transferred = transfer_to_original(rec, func, tfunc, transfer_cfg,
                                           range_margin=range_margin)
        report.stages[stage] = {
            "anchors": [float(x) for x in anchors],
            "truncated_record": rec.to_dict(),
            "transferred_record": transferred.to_dict(),
        }
        return transferred
    except (NeucritError, ValueError) as e:
        report.errors[stage] = {"type": type(e).__name__, "message": str(e)}
        return None


def run_pipeline(config: dict) -> RunReport:
    """Run the staged experiment described by `config` and return the report.

    Stage order: spectrum and hypothesis audit, constants, the three
    truncated mountain passes, homotopy bound, reduction, ledger with
    reconciliation, and multistart while the deficiency is nonzero.
    """
    config = validate_config(config)
    report = RunReport(config)
    t_start = time.perf_counter()

    def clock(stage, t0):
        report.timings[stage] = time.perf_counter() - t0

    # stage 1: spectrum + split + hypotheses (mandatory)
    t0 = time.perf_counter()
    try:
        dom_cfg = config["domain"]
        domain = Domain(dom_cfg["kind"], tuple(dom_cfg["lengths"]),
                        dom_cfg.get("quad_points"))
        spec0 = build_spectrum(domain, config["modes"])
        nl = config["nonlinearity"]
        f = build_nonlinearity(
            [tuple(kn) for kn in nl["knots"]],
            nl["slope_minus_inf"], nl["slope_plus_inf"],
            shape_points=[tuple(sp) for sp in nl.get("shape_points", ())],
            blend_margin=nl.get("blend_margin", 1.0),
        )
        spec = split_spectrum(spec0, f.slope_plus_inf)
        report.spectrum = spec
        report.functional = EnergyFunctional(spec, f)
        report.hypotheses = check_hypotheses(f, spec)
        report.stages["spectrum"] = spec.summary()
    except (NeucritError, ValueError) as e:
        report.errors["spectrum"] = {"type": type(e).__name__, "message": str(e)}
        clock("spectrum", t0)
        return report
    clock("spectrum", t0)

    scfg = SolverConfig(**config.get("solver", {}))
    lcfg = LedgerConfig(**config.get("ledger", {}))
    red_cfg = config.get("reduction", {})
    stages = set(config["stages"])
    func = report.functional

    constants = []
    if "constants" in stages:
        t0 = time.perf_counter()
        constants = find_constants(func, scfg)
        report.stages["constants"] = [r.to_dict() for r in constants]
        clock("constants", t0)

    mins = _min_type_zeros(f)
    transferred = []
    for kind in ("below", "above", "interval"):
        stage = f"truncation_{kind}"
        if stage not in stages:
            continue
        t0 = time.perf_counter()
        if kind in ("below", "above") and not mins:
            report.skips[stage] = "no minimum-type zero to anchor the truncation"
        elif kind == "interval" and len(mins) < 2:
            report.skips[stage] = "interval truncation needs two minimum-type zeros"
        else:
            anchors = {
                "below": (mins[0],) if mins else (),
                "above": (mins[-1],) if mins else (),
                "interval": (mins[0], mins[-1]) if len(mins) >= 2 else (),
            }[kind]
            rec = _truncation_stage(report, kind, anchors, scfg, scfg,
                                    lcfg.range_margin)
            if rec is not None:
                transferred.append(rec)
        clock(stage, t0)

    R = None
    if "homotopy" in stages:
        t0 = time.perf_counter()
        try:
            lambdas = np.linspace(0.0, 1.0, scfg.lambda_count)
            hres = homotopy_bound(f, spec, lambdas, scfg)
            R = hres.R
            report.stages["homotopy"] = hres.to_dict()
        except (NeucritError, ValueError) as e:
            report.errors["homotopy"] = {"type": type(e).__name__, "message": str(e)}
        clock("homotopy", t0)
    if R is None:
        known = constants + transferred
        top = max((r.h1_norm for r in known), default=1.0)
        R = scfg.safety_factor * max(top, 1.0)
        report.warnings.append(
            f"homotopy bound unavailable; fallback R={R:.6g} from found records"
        )

    reduction_rec = None
    if "reduction" in stages:
        t0 = time.perf_counter()
        if not report.hypotheses.reduction_applicable:
            report.skips["reduction"] = (
                "ReductionInapplicable: gamma reaches the complement spectrum"
            )
        else:
            try:
                ctx = make_reduction_context(
                    func,
                    inner_tol=red_cfg.get("inner_tol", 1e-9),
                    max_inner=red_cfg.get("max_inner", 20000),
                )
                grid_R = red_cfg.get("grid_radius") or R
                reduction_rec = maximize_reduced(ctx, scfg, R=grid_R)
                report.stages["reduction"] = reduction_rec.to_dict()
            except (NeucritError, ValueError, np.linalg.LinAlgError) as e:
                report.errors["reduction"] = {"type": type(e).__name__,
                                              "message": str(e)}
        clock("reduction", t0)

    if "ledger" not in stages:
        return report

    t0 = time.perf_counter()
    ledger = DegreeLedger(spec.k, R, spec, lcfg)
    report.ledger = ledger
    qual = {}

    def admit(rec):
        rep = qualitative_classify(rec, func, lcfg.qual_tol)
        if not rep.passed:
            report.warnings.append(
                f"record from stage {rec.provenance.get('stage')} failed "
                f"qualitative checks: {[n for n, ok, _ in rep.checks if not ok]}"
            )
            return
        disposition = ledger.add(rec)
        if disposition.startswith("added"):
            idx = len(ledger.records) - 1
            qual[idx] = rep.to_dict()

    for rec in constants:
        admit(rec)
    for rec in transferred:
        admit(rec)
    if reduction_rec is not None:
        admit(reduction_rec)
    lrep = ledger.reconcile(func)
    report.ledger_report = lrep
    report.stages["ledger"] = {"initial_reconciliation": lrep.to_dict()}
    clock("ledger", t0)

    if "multistart" in stages and lrep.deficiency != 0:
        t0 = time.perf_counter()
        new_found = []
        chunks = 0
        budget_left = scfg.multistart_budget
        # reflections of known nonconstant solutions come first: on these
        # symmetric boxes they are critical points too, usually the missing
        # half of the count
        seeds = []
        for rec in ledger.records:
            if rec.is_constant():
                continue
            for axis in range(spec.domain.ndim):
                seeds.append(spec.mirror(rec.coeffs, axis))
            if spec.domain.ndim == 2:
                seeds.append(spec.mirror(spec.mirror(rec.coeffs, 0), 1))
        rng = np.random.default_rng(scfg.rng_seed + 10_000)
        while budget_left > 0 and lrep.deficiency != 0:
            n = min(_MULTISTART_CHUNK, budget_left)
            found = multistart(func, scfg, R, seeds=seeds, budget=n, rng=rng)
            seeds = []
            budget_left -= n
            chunks += 1
            for rec in found:
                admit(rec)
            lrep = ledger.reconcile(func)
            report.ledger_report = lrep
            new_found = [r.to_dict() for r in found]
        report.stages["multistart"] = {
            "chunks": chunks,
            "last_chunk_found": new_found,
            "final_deficiency": lrep.deficiency,
        }
        report.stages["ledger"]["final_reconciliation"] = lrep.to_dict()
        clock("multistart", t0)

    report.records = list(ledger.records)
    report.stages["ledger"]["qualitative"] = qual
    report.stages["ledger"]["reconciliation"] = lrep.to_dict()
    report.timings["total"] = time.perf_counter() - t_start
    return report
