"""Finite-dimensional reduction: eliminate the high-frequency block by
strongly convex minimization.

With the split grad slope sitting between the low block X and the high
block Y, and the nonlinearity's certified top slope gamma below every Y
eigenvalue, the map y -> J(x + y) is strongly convex on Y with modulus

    m = (lambda_min(Y) - gamma) / (1 + lambda_min(Y))

in the Sobolev metric.  psi(x) is its unique minimizer, the reduced
functional Jt(x) = J(x + psi(x)) lives on the k-dimensional X block, and
maximizing Jt produces the distinguished critical point whose full Hessian
index is expected to be k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .errors import MaxItersExceeded, ModulusViolated, ReductionInapplicable
from .records import SolverConfig, make_record
from .solvers import refine_critical

__all__ = [
    "ReductionContext",
    "make_reduction_context",
    "psi",
    "reduced_value",
    "reduced_gradient",
    "maximize_reduced",
    "monotonicity_certificate",
    "local_max_min_at_constant",
    "LocalMaxMinReport",
]

_MODULUS_SLACK = 1e-10


@dataclass(frozen=True)
class ReductionContext:
    functional: object
    m: float            # strong convexity modulus of the Y block, H1 metric
    lam: float          # certified Lipschitz bound of the Y-block gradient
    inner_tol: float
    max_inner: int

    @property
    def spectrum(self):
        return self.functional.spectrum

    @property
    def k(self):
        return self.spectrum.k


def make_reduction_context(functional, inner_tol=1e-9, max_inner=20000) -> ReductionContext:
    """Validate applicability and package the certified constants.

    Raises ReductionInapplicable when gamma >= lambda_min(Y), where the
    Y block stops being uniformly convex and the reduction has no
    uniqueness guarantee.
    """
    spec = functional.spectrum
    if not hasattr(spec, "k"):
        raise ValueError("spectrum carries no X/Y split; call split_spectrum first")
    f = functional.nonlinearity
    lam_min_y = spec.lambda_min_y
    if not np.isfinite(lam_min_y) or f.gamma >= lam_min_y:
        raise ReductionInapplicable(
            f"gamma={f.gamma:.6g} is not below the first Y eigenvalue {lam_min_y:.6g}"
        )
    m = (lam_min_y - f.gamma) / (1.0 + lam_min_y)
    # Lipschitz bound of y -> P_Y grad J(x+y) in the Sobolev metric:
    # <H y, y> = |y|^2 - int (f'(u)+1) y^2, and on Y the L2 norm is
    # controlled by |y|^2 / (1 + lambda_min(Y)).
    lam = 1.0 + max(0.0, -(1.0 + f.min_slope)) / (1.0 + lam_min_y)
    return ReductionContext(functional, m, lam, float(inner_tol), int(max_inner))


def _y_block_gradient(ctx, u):
    return ctx.spectrum.y_projection(ctx.functional.gradient(u))


def psi(ctx: ReductionContext, x, y0=None):
    """The unique Y-supported minimizer of y -> J(x + y).

    Fixed-step descent with the certified step 2/(m + Lam) until the
    residual drops below 1e-4, then Newton on the Y block.  Along the way
    consecutive iterates double as probes of the strong-convexity
    inequality; a violation raises ModulusViolated, which means gamma was
    certified wrong.
    """
    spec = ctx.spectrum
    func = ctx.functional
    x = spec.x_projection(np.asarray(x, dtype=float))
    y = spec.y_projection(np.zeros(spec.n_modes) if y0 is None else np.asarray(y0, dtype=float))
    yi = spec.y_indices

    step = 2.0 / (ctx.m + ctx.lam)
    g = _y_block_gradient(ctx, x + y)
    for _ in range(ctx.max_inner):
        res = spec.h1_norm(g)
        if res <= ctx.inner_tol:
            return y
        if res <= 1e-4:
            break
        y_new = y - step * g
        g_new = _y_block_gradient(ctx, x + y_new)
        dy = y_new - y
        lhs = spec.h1_inner(g_new - g, dy)
        rhs = ctx.m * spec.h1_inner(dy, dy)
        if lhs < rhs - _MODULUS_SLACK:
            raise ModulusViolated(
                f"monotonicity gap {lhs - rhs:.3e} along the descent iterates"
            )
        y, g = y_new, g_new
    else:
        raise MaxItersExceeded("fixed-step phase of the inner minimization stalled")

    for _ in range(60):
        if spec.h1_norm(_y_block_gradient(ctx, x + y)) <= ctx.inner_tol:
            return y
        A, _ = func.hessian_pencil(x + y)
        G = func.l2_gradient(x + y)
        delta = np.linalg.solve(A[np.ix_(yi, yi)], -G[yi])
        y = y.copy()
        y[yi] += delta
    raise MaxItersExceeded("Newton phase of the inner minimization stalled")


def reduced_value(ctx: ReductionContext, x, y0=None) -> float:
    x = ctx.spectrum.x_projection(np.asarray(x, dtype=float))
    return ctx.functional.value(x + psi(ctx, x, y0))


def reduced_gradient(ctx: ReductionContext, x, y0=None):
    """X-projection of the full gradient at x + psi(x); this IS the gradient
    of the reduced functional, no chain-rule correction needed because the
    Y block is stationary there."""
    x = ctx.spectrum.x_projection(np.asarray(x, dtype=float))
    u = x + psi(ctx, x, y0)
    return ctx.spectrum.x_projection(ctx.functional.gradient(u))


def monotonicity_certificate(ctx: ReductionContext, trials=200, rng=None, scale=3.0):
    """Sampled check of the strong-convexity inequality on random triples
    (x, y1, y2).  Returns the worst margin lhs - m*|dy|^2 (should be
    >= -1e-10); raises ModulusViolated if any sample breaks it."""
    spec = ctx.spectrum
    rng = np.random.default_rng(0) if rng is None else rng
    worst = np.inf
    for _ in range(trials):
        x = spec.x_projection(rng.normal(scale=scale, size=spec.n_modes))
        y1 = spec.y_projection(rng.normal(scale=scale, size=spec.n_modes))
        y2 = spec.y_projection(rng.normal(scale=scale, size=spec.n_modes))
        dy = y1 - y2
        g1 = _y_block_gradient(ctx, x + y1)
        g2 = _y_block_gradient(ctx, x + y2)
        margin = spec.h1_inner(g1 - g2, dy) - ctx.m * spec.h1_inner(dy, dy)
        worst = min(worst, margin)
        if margin < -_MODULUS_SLACK:
            raise ModulusViolated(f"sampled monotonicity margin {margin:.3e}")
    return worst


def _compact_to_field(spec, xi):
    x = np.zeros(spec.n_modes)
    x[spec.x_indices] = xi
    return x


def maximize_reduced(ctx: ReductionContext, cfg: SolverConfig, R=None):
    """Global maximizer of the reduced functional.

    Seeds: a regular grid of (2*ceil(R)+1)^k points over [-R, R]^k for
    k <= 4 (random seeds beyond that), plus the X-projections of every
    constant solution.  The best seeds get a quasi-Newton ascent on the k
    reduced variables, and the winner is polished as a critical point of
    the full functional.
    """
    spec = ctx.spectrum
    func = ctx.functional
    k = ctx.k
    zeros = [t for t, _ in func.nonlinearity.zeros()]
    if R is None:
        span = max((abs(t) for t in zeros), default=1.0)
        R = 2.0 * span * np.sqrt(spec.domain.measure) + 5.0

    seeds = []
    per_axis = 2 * int(np.ceil(R)) + 1
    note_grid = None
    if k <= 4:
        axis = np.linspace(-R, R, per_axis)
        mesh = np.meshgrid(*([axis] * k), indexing="ij")
        seeds.extend(np.stack([m.ravel() for m in mesh], axis=-1))
    else:
        rng = np.random.default_rng(cfg.rng_seed + 77)
        seeds.extend(rng.uniform(-R, R, size=(per_axis ** 4, k)))
        note_grid = f"k={k} > 4: grid seeding replaced by random seeds"
    for t in zeros:
        seeds.append(spec.constant_field(t)[spec.x_indices])

    y_cache = [None]

    def value_at(xi):
        x = _compact_to_field(spec, xi)
        y = psi(ctx, x, y_cache[0])
        y_cache[0] = y
        return func.value(x + y)

    vals = np.array([value_at(np.asarray(s, dtype=float)) for s in seeds])
    order = np.argsort(vals)[::-1]
    top = [np.asarray(seeds[i], dtype=float) for i in order[:6]]

    def neg_val(xi):
        return -value_at(xi)

    def neg_grad(xi):
        x = _compact_to_field(spec, xi)
        y = psi(ctx, x, y_cache[0])
        y_cache[0] = y
        return -spec.x_projection(func.gradient(x + y))[spec.x_indices]

    best_xi, best_val = None, -np.inf
    for s in top:
        out = scipy_minimize(neg_val, s, jac=neg_grad, method="BFGS",
                             options={"gtol": 1e-10, "maxiter": 400})
        if -out.fun > best_val:
            best_val, best_xi = -out.fun, out.x

    x = _compact_to_field(spec, best_xi)
    u = x + psi(ctx, x, y_cache[0])
    polished = refine_critical(func, u, cfg)
    if polished is not None and spec.h1_dist(polished, u) < 0.5:
        u = polished
    rec = make_record(
        func, u, cfg, "reduction_max",
        {"stage": "reduction", "functional": func.nonlinearity.label,
         "reduced_value": float(func.value(u)), "k": k},
    )
    notes = []
    if note_grid:
        notes.append(note_grid)
    if not rec.degenerate and rec.morse_index != k:
        notes.append(
            f"full Hessian index {rec.morse_index} differs from the block dimension k={k}"
        )
    for n in notes:
        rec = rec.with_notes(n)
    return rec


@dataclass
class LocalMaxMinReport:
    alpha: float
    ell: int
    eps: float
    directions: list  # dicts: mode index, eigenvalue, block, deltas, pass
    passed: bool

    def to_dict(self):
        return {
            "alpha": self.alpha, "ell": self.ell, "eps": self.eps,
            "directions": list(self.directions), "passed": self.passed,
        }


def local_max_min_at_constant(ctx: ReductionContext, alpha, ell, eps=1e-3) -> LocalMaxMinReport:
    """Scan the reduced functional around a crossing constant.

    Along X directions whose eigenvalue sits below f'(alpha) (the low
    block, ell of them) the constant should be a strict local max of the
    reduced functional; along the remaining X directions (middle block) a
    strict local min.  Each direction also gets a centered second
    difference compared against the coefficient-space Hessian diagonal
    lambda_j - f'(alpha): the full Hessian is diagonal at a constant, so
    its Schur complement onto X is exactly that block.
    """
    spec = ctx.spectrum
    f = ctx.functional.nonlinearity
    falpha = f(alpha)
    if abs(falpha) > 1e-10:
        raise ValueError(f"f({alpha}) = {falpha:.3g} != 0; not a constant solution")
    slope = f.deriv(alpha)
    eig = [spec.pairs[i].eigenvalue for i in spec.x_indices]
    ell_true = sum(1 for lam in eig if lam < slope)
    if ell != ell_true:
        raise ValueError(
            f"ell={ell} inconsistent with f'({alpha})={slope:.6g}: "
            f"{ell_true} X eigenvalues lie below it"
        )
    if ell >= spec.k:
        raise ValueError(f"ell={ell} must be < k={spec.k}")
    if any(abs(lam - slope) < 1e-8 for lam in eig):
        raise ValueError(f"f'({alpha})={slope:.6g} is resonant with an X eigenvalue")

    x0 = spec.x_projection(spec.constant_field(alpha))
    J0 = reduced_value(ctx, x0)
    rows = []
    ok = True
    for i in spec.x_indices:
        lamj = spec.pairs[i].eigenvalue
        block = "low" if lamj < slope else "middle"
        e = np.zeros(spec.n_modes)
        e[i] = 1.0
        Jp = reduced_value(ctx, x0 + eps * e)
        Jm = reduced_value(ctx, x0 - eps * e)
        second = (Jp - 2.0 * J0 + Jm) / eps ** 2
        hess = lamj - slope
        if block == "low":
            direction_ok = Jp < J0 and Jm < J0
        else:
            direction_ok = Jp > J0 and Jm > J0
        ok = ok and direction_ok
        rows.append({
            "mode": i, "eigenvalue": lamj, "block": block,
            "delta_plus": Jp - J0, "delta_minus": Jm - J0,
            "second_difference": second, "hessian_diagonal": hess,
            "ok": direction_ok,
        })
    return LocalMaxMinReport(float(alpha), int(ell), float(eps), rows, ok)
