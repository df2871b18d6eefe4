"""Search stages: constants, descent, mountain pass, homotopy bound,
multistart.

All solvers work on coefficient vectors and report Sobolev residuals.  The
descent loop is hand-rolled backtracking on the metric gradient so the
energy sequence is provably nonincreasing; once the residual is small the
iterate is polished by a Newton-type root solve on the gradient system
(MINPACK's dogleg trust region, plus a plain Newton fallback), which
converges to saddles as happily as to minima.

The mountain pass is a discrete path method: keep a polyline between two
low-energy endpoints, repeatedly pick the maximal-energy node, slide it
along the negative gradient projected off the path tangent, and
re-equalize node spacing.  A transverse perturbation of the initial
straight path keeps it out of the constants line, which is invariant under
the flow and full of index-2 traps.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import root

from .errors import (
    DivergingIterates,
    MaxItersExceeded,
    PathCollapse,
)
from .nonlinearity import find_zeros, homotopy, require_nonresonant
from .records import CriticalPointRecord, SolverConfig, make_record, principal_simple_signdef

__all__ = [
    "SolverConfig",
    "CriticalPointRecord",
    "find_constants",
    "minimize",
    "refine_critical",
    "mountain_pass",
    "homotopy_bound",
    "HomotopyBoundResult",
    "multistart",
    "dedup_records",
]


def find_constants(functional, cfg: SolverConfig) -> list:
    """One record per prescribed zero; constants solve the problem exactly."""
    out = []
    for t, s in functional.nonlinearity.zeros():
        coeffs = functional.spectrum.constant_field(t)
        rec = make_record(
            functional, coeffs, cfg, "constant",
            {"stage": "constants", "zero": t, "zero_slope": s,
             "functional": functional.nonlinearity.label},
        )
        out.append(rec)
    return out


def _descend(functional, start, cfg, radius_guard=None, tol=None, trace=None):
    """Backtracking descent on the metric gradient.  Returns (coeffs, iters).

    Guarantees J never increases along the iterates.  Raises
    DivergingIterates when the iterate norm passes radius_guard and
    MaxItersExceeded when the budget runs out before `tol`.
    """
    spec = functional.spectrum
    tol = cfg.grad_tol if tol is None else tol
    u = np.asarray(start, dtype=float).copy()
    J = functional.value(u)
    if trace is not None:
        trace.append(J)
    step = 1.0
    for it in range(cfg.max_iters):
        g = functional.gradient(u)
        gn2 = spec.h1_inner(g, g)
        if np.sqrt(gn2) <= tol:
            return u, it
        # Armijo backtracking in the Sobolev metric
        accepted = False
        for _ in range(60):
            cand = u - step * g
            Jc = functional.value(cand)
            if Jc <= J - 1e-4 * step * gn2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # gradient direction gives no decrease at tiny steps: converged
            # to working precision
            return u, it
        u, J = cand, Jc
        step = min(step * 1.6, 1e3)
        if trace is not None:
            trace.append(J)
        if radius_guard is not None and spec.h1_norm(u) > radius_guard:
            raise DivergingIterates(
                f"iterate norm {spec.h1_norm(u):.3g} passed the guard {radius_guard:.3g}"
            )
    raise MaxItersExceeded(f"descent did not reach tol={tol:g} in {cfg.max_iters} iters")


def refine_critical(functional, start, cfg: SolverConfig):
    """Newton-type polish of the gradient system from `start`.

    Returns refined coefficients with residual <= grad_tol, or None if the
    solve stalls.  MINPACK hybr (Newton direction inside a dogleg trust
    region, so indefinite Hessians are fine) does the heavy lifting; a few
    plain Newton steps mop up if it returns slightly above tolerance.
    """
    sol = root(
        functional.l2_gradient,
        np.asarray(start, dtype=float),
        jac=lambda c: functional.hessian_pencil(c)[0],
        method="hybr",
        options={"xtol": 1e-13, "maxfev": 200 * (len(start) + 1)},
    )
    u = sol.x
    if not np.all(np.isfinite(u)):
        return None
    for _ in range(8):
        if functional.residual(u) <= cfg.grad_tol:
            return u
        A, _ = functional.hessian_pencil(u)
        G = functional.l2_gradient(u)
        try:
            delta = np.linalg.solve(A, -G)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        u = u + delta
    return u if functional.residual(u) <= cfg.grad_tol else None


def minimize(functional, start, cfg: SolverConfig, radius_guard=None,
             trace=None) -> CriticalPointRecord:
    """Descend from `start` to a critical point, then Newton-polish.

    The energy sequence along the iterates is nonincreasing.  A start that
    already meets grad_tol is returned as-is with zero iterations.
    """
    start = np.asarray(start, dtype=float)
    if functional.residual(start) <= cfg.grad_tol:
        _, _, index0, _ = functional.morse_data(start, cfg.degeneracy_tol)
        return make_record(functional, start, cfg,
                           "minimizer" if index0 == 0 else "other",
                           {"stage": "minimize", "functional": functional.nonlinearity.label},
                           iterations=0)
    u, iters = _descend(functional, start, cfg, radius_guard=radius_guard,
                        tol=max(cfg.grad_tol, 1e-7), trace=trace)
    polished = refine_critical(functional, u, cfg)
    if polished is not None and functional.spectrum.h1_dist(polished, u) < 1.0:
        u = polished
    else:
        u, _ = _descend(functional, u, cfg, radius_guard=radius_guard, tol=cfg.grad_tol)
    evals, _, index, _ = functional.morse_data(u, cfg.degeneracy_tol)
    cls = "minimizer" if index == 0 else "other"
    notes = () if index == 0 else (f"descent stopped at index {index}",)
    return make_record(functional, u, cfg, cls,
                       {"stage": "minimize", "functional": functional.nonlinearity.label},
                       iterations=iters, notes=notes)


def _redistribute(spec, path):
    """Reparametrize the polyline to equal Sobolev arclength."""
    n = len(path)
    seg = np.array([spec.h1_dist(path[i + 1], path[i]) for i in range(n - 1)])
    total = seg.sum()
    if total <= 0:
        return path
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, total, n)
    out = [path[0]]
    for t in targets[1:-1]:
        j = int(np.searchsorted(cum, t, side="right") - 1)
        j = min(j, n - 2)
        w = (t - cum[j]) / seg[j] if seg[j] > 0 else 0.0
        out.append((1 - w) * path[j] + w * path[j + 1])
    out.append(path[-1])
    return out


def mountain_pass(functional, end_a, end_b, cfg: SolverConfig) -> CriticalPointRecord:
    """Choi-McKenna style discrete mountain pass between two anchors.

    Raises PathCollapse when no barrier exists above the endpoint energies
    (for instance when J is convex between the anchors) or when the refined
    candidate falls back into an endpoint.  The returned record carries the
    Morse data; classification is "mp_type" exactly when the index is 1 and
    the principal Hessian eigenpair is simple with a sign-definite
    eigenfield.
    """
    spec = functional.spectrum
    a = np.asarray(end_a, dtype=float)
    b = np.asarray(end_b, dtype=float)
    n = cfg.path_nodes
    if n < 5:
        raise ValueError("path_nodes must be at least 5")
    Ja, Jb = functional.value(a), functional.value(b)
    end_level = max(Ja, Jb)

    # straight path plus a transverse bump; the bump leaves the constants
    # line, which is flow-invariant and hides the saddle from the path
    s = np.linspace(0.0, 1.0, n)
    bump = np.zeros(spec.n_modes)
    for j in range(1, min(4, spec.n_modes)):
        bump[j] = 0.5 ** (j - 1)
    bump /= spec.h1_norm(bump)
    delta = 0.01 * (spec.h1_dist(a, b) + 1.0)
    path = [(1 - si) * a + si * b + delta * np.sin(np.pi * si) * bump for si in s]

    steps = np.full(n, 0.2)
    best = None
    for sweep in range(cfg.max_iters):
        energies = np.array([functional.value(p) for p in path])
        i = int(np.argmax(energies))
        if i in (0, n - 1):
            raise PathCollapse("the maximal node is an endpoint; no interior barrier")
        g = functional.gradient(path[i])
        res = spec.h1_norm(g)
        if res <= 1e-4 or (best is not None and sweep - best[2] > 50):
            cand = refine_critical(functional, path[i], cfg)
            if cand is not None:
                d_end = min(spec.h1_dist(cand, a), spec.h1_dist(cand, b))
                if d_end <= cfg.dedup_radius:
                    raise PathCollapse("refined candidate fell into an endpoint")
                Jc = functional.value(cand)
                if Jc <= end_level + 1e-12:
                    raise PathCollapse(
                        f"candidate level {Jc:.6g} does not exceed the endpoints {end_level:.6g}"
                    )
                return _finish_mp(functional, cand, cfg, sweep, end_a=a, end_b=b)
            best = None  # refinement failed; keep sweeping
        if best is None or res < best[1]:
            best = (i, res, sweep)
        tau = path[i + 1] - path[i - 1]
        tn = spec.h1_norm(tau)
        if tn > 0:
            tau = tau / tn
            d = g - spec.h1_inner(g, tau) * tau
        else:
            d = g
        dn2 = spec.h1_inner(d, d)
        if dn2 <= 0:
            d = g
            dn2 = spec.h1_inner(d, d)
        # backtracking on the node energy
        step = steps[i]
        Ji = energies[i]
        moved = False
        for _ in range(40):
            cand = path[i] - step * d
            if functional.value(cand) < Ji - 1e-6 * step * dn2:
                moved = True
                break
            step *= 0.5
        if moved:
            path[i] = cand
            steps[i] = min(step * 1.5, 5.0)
        else:
            steps[i] = max(step, 1e-8)
        if sweep % 5 == 4:
            path = _redistribute(spec, path)
    raise MaxItersExceeded(f"mountain pass did not settle in {cfg.max_iters} sweeps")


def _finish_mp(functional, coeffs, cfg, sweeps, end_a, end_b) -> CriticalPointRecord:
    spec = functional.spectrum
    rec = make_record(
        functional, coeffs, cfg, "other",
        {"stage": "mountain_pass", "functional": functional.nonlinearity.label,
         "endpoint_ranges": [list(spec.field_range(end_a)), list(spec.field_range(end_b))]},
        iterations=sweeps,
    )
    is_mp = rec.morse_index == 1 and principal_simple_signdef(functional, rec, cfg.simplicity_tol)
    if is_mp:
        rec.classification = "mp_type"
    else:
        rec = rec.with_notes(
            f"saddle of index {rec.morse_index} failed the mountain-pass shape check"
        )
    return rec


def _random_ball_starts(spec, rng, count, radius):
    starts = []
    for _ in range(count):
        g = rng.standard_normal(spec.n_modes)
        nrm = spec.h1_norm(g)
        if nrm == 0:
            continue
        r = radius * rng.uniform() ** (1.0 / 2.0)
        starts.append(g * (r / nrm))
    return starts


def dedup_records(spec, records, dedup_radius):
    """Deterministic merge: sort by energy then coefficients, keep the first
    of every Sobolev-ball cluster."""
    ordered = sorted(
        records,
        key=lambda r: (round(r.energy, 12), tuple(np.round(r.coeffs, 10))),
    )
    kept = []
    for rec in ordered:
        if all(spec.h1_dist(rec.coeffs, k.coeffs) > dedup_radius for k in kept):
            kept.append(rec)
    return kept


def multistart(functional, cfg: SolverConfig, radius, seeds=(), budget=None,
               rng=None, descent=True) -> list:
    """Random starts in the Sobolev ball of the given radius, each refined by
    a Newton-type root solve and optionally by descent.  Returns records
    deduplicated and deterministically ordered (energy, then coefficients).

    Seeds are extra deterministic starts prepended to the random ones and do
    not count against the budget.
    """
    spec = functional.spectrum
    budget = cfg.multistart_budget if budget is None else budget
    rng = np.random.default_rng(cfg.rng_seed) if rng is None else rng
    starts = [np.asarray(s, dtype=float) for s in seeds]
    starts += _random_ball_starts(spec, rng, budget, radius)

    found = []
    for idx, start in enumerate(starts):
        cand = refine_critical(functional, start, cfg)
        if cand is not None and spec.h1_norm(cand) <= 4.0 * radius + 10.0:
            found.append((cand, "newton", idx))
        if descent:
            try:
                u, _ = _descend(functional, start, cfg,
                                radius_guard=2.0 * radius + 10.0,
                                tol=max(cfg.grad_tol, 1e-7))
            except (DivergingIterates, MaxItersExceeded):
                u = None
            if u is not None:
                polished = refine_critical(functional, u, cfg)
                if polished is not None:
                    found.append((polished, "descent", idx))

    records = []
    for coeffs, method, idx in found:
        if functional.residual(coeffs) > cfg.grad_tol:
            continue
        lo, hi = spec.field_range(coeffs)
        is_const = hi - lo <= 1e-9 * (1.0 + max(abs(lo), abs(hi)))
        evals, _, index, _ = functional.morse_data(coeffs, cfg.degeneracy_tol)
        cls = "constant" if is_const else ("minimizer" if index == 0 else "other")
        records.append(make_record(
            functional, coeffs, cfg, cls,
            {"stage": "multistart", "method": method, "start_index": idx,
             "functional": functional.nonlinearity.label},
        ))
    return dedup_records(spec, records, cfg.dedup_radius)


class HomotopyBoundResult:
    """Outcome of the homotopy sweep: the certified search radius and the
    per-member solution norms."""

    def __init__(self, R, max_norm, safety_factor, per_lambda, lambda_one_clean):
        self.R = R
        self.max_norm = max_norm
        self.safety_factor = safety_factor
        self.per_lambda = per_lambda  # [(lam, n_found, max_norm)]
        self.lambda_one_clean = lambda_one_clean

    def to_dict(self):
        return {
            "R": self.R,
            "max_norm": self.max_norm,
            "safety_factor": self.safety_factor,
            "per_lambda": [
                {"lam": l, "n_found": n, "max_norm": m} for l, n, m in self.per_lambda
            ],
            "lambda_one_clean": self.lambda_one_clean,
        }


def homotopy_bound(nonlinearity, spectrum, lambdas, cfg: SolverConfig) -> HomotopyBoundResult:
    """Sweep the family h_lam = lam f'(inf) t + (1 - lam) f(t), multistart
    each member, and return R = safety_factor x the largest solution norm.

    At lam = 1 the member is linear and nonresonant, so the only solution is
    0; lambda_one_clean reports whether the sweep respected that.  Raises
    ResonantSlope or AsymmetricSlopes before sweeping if the tails are bad.
    """
    from .energy import EnergyFunctional

    require_nonresonant(nonlinearity, spectrum)
    knot_ts = [t for t, _ in nonlinearity.zeros()]
    span = max(abs(t) for t in knot_ts) if knot_ts else 1.0
    start_radius = cfg.homotopy_start_radius
    if start_radius is None:
        start_radius = 4.0 * max(1.0, span * np.sqrt(spectrum.domain.measure))

    per_lambda = []
    max_norm = 0.0
    clean = True
    for li, lam in enumerate(lambdas):
        g = homotopy(nonlinearity, float(lam))
        func = EnergyFunctional(spectrum, g)
        seeds = [
            spectrum.constant_field(t)
            for t in find_zeros(g, -span - 3.0, span + 3.0)
        ]
        # large-amplitude low-mode seeds: the norm-extremal solutions of
        # asymptotically linear problems live in this family
        for j in range(min(2, spectrum.n_modes)):
            amp_unit = spectrum.pairs[j].norm_constant
            for amp in (span + 1.0, 2.0 * span + 2.0, 3.0 * span + 3.0):
                for sgn in (1.0, -1.0):
                    e = np.zeros(spectrum.n_modes)
                    e[j] = sgn * amp / amp_unit
                    seeds.append(e)
        rng = np.random.default_rng(cfg.rng_seed + 1000 + li)
        recs = multistart(func, cfg, start_radius, seeds=seeds,
                          budget=cfg.homotopy_budget, rng=rng, descent=False)
        norms = [r.h1_norm for r in recs]
        top = max(norms) if norms else 0.0
        per_lambda.append((float(lam), len(recs), top))
        max_norm = max(max_norm, top)
        if abs(float(lam) - 1.0) < 1e-12 and top > 1e-6:
            clean = False
    R = cfg.safety_factor * max_norm
    return HomotopyBoundResult(R, max_norm, cfg.safety_factor, per_lambda, clean)
