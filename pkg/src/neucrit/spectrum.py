"""Neumann eigenbasis machinery on intervals and rectangles.

The Neumann Laplacian on a box has a closed-form cosine eigenbasis, so no
eigensolver is involved: eigenvalues on [0, L] are (j*pi/L)^2 with j >= 0,
and products of axis cosines on rectangles.  Fields are plain numpy arrays
of coefficients in the L2-orthonormal basis.  Both the L2 and the Sobolev
(H1) inner products are diagonal in these coordinates, which keeps every
norm, projection and splitting in this package a cheap vector operation.

Quadrature is a uniform grid with trapezoid weights.  On the even-periodic
extension the trapezoid rule integrates products cos(j.) * cos(l.) exactly
as long as j + l stays below twice the panel count, so with the enforced
oversampling (points >= 4 x modes per axis) the discrete Gram matrix of the
basis is the identity up to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResonantSlope

__all__ = [
    "Domain",
    "EigenPair",
    "SpectrumSlice",
    "build_spectrum",
    "split_spectrum",
]


@dataclass(frozen=True)
class Domain:
    """A product box: interval [0, L] or rectangle [0, L1] x [0, L2].

    Parameters
    ----------
    kind : str
        Either "interval" or "rectangle".
    lengths : tuple of float
        One or two positive side lengths, matching `kind`.
    quad_points : int or None
        Quadrature points per axis.  None picks 4 x (modes per axis) at
        spectrum build time, the smallest count that keeps the transforms
        alias-free.
    """

    kind: str
    lengths: tuple
    quad_points: int | None = None

    def __post_init__(self):
        if self.kind not in ("interval", "rectangle"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        need = 1 if self.kind == "interval" else 2
        lengths = tuple(float(L) for L in self.lengths)
        if len(lengths) != need:
            raise ValueError(f"{self.kind} needs {need} length(s), got {len(lengths)}")
        if any(not np.isfinite(L) or L <= 0 for L in lengths):
            raise ValueError("side lengths must be positive and finite")
        object.__setattr__(self, "lengths", lengths)
        if self.quad_points is not None and int(self.quad_points) < 2:
            raise ValueError("quad_points must be at least 2")

    @property
    def ndim(self) -> int:
        return len(self.lengths)

    @property
    def measure(self) -> float:
        return float(np.prod(self.lengths))


@dataclass(frozen=True)
class EigenPair:
    """One Neumann eigenvalue with its mode multi-index and normalization."""

    index: int
    eigenvalue: float
    mode: tuple
    norm_constant: float


def _axis_nodes_weights(length: float, n: int):
    # closed trapezoid rule; exact for the cosine products used here
    x = np.linspace(0.0, length, n)
    w = np.full(n, length / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def _axis_basis(length: float, x: np.ndarray, mode_max: int):
    """Columns phi_j(x), j = 0..mode_max, L2-normalized on [0, length]."""
    cols = np.empty((x.size, mode_max + 1))
    dcols = np.empty_like(cols)
    cols[:, 0] = np.sqrt(1.0 / length)
    dcols[:, 0] = 0.0
    for j in range(1, mode_max + 1):
        freq = j * np.pi / length
        amp = np.sqrt(2.0 / length)
        cols[:, j] = amp * np.cos(freq * x)
        dcols[:, j] = -amp * freq * np.sin(freq * x)
    return cols, dcols


class SpectrumSlice:
    """The first `n_modes` Neumann eigenpairs on a domain, plus transforms.

    Treat instances as immutable.  `split_spectrum` returns a new slice
    sharing the arrays but carrying the X/Y splitting data.

    Attributes
    ----------
    eigenvalues : ndarray
        Ascending eigenvalues, ties broken by lexicographic mode tuple.
    basis : ndarray, shape (n_points, n_modes)
        Eigenfunction values on the quadrature grid.
    weights : ndarray
        Quadrature weights for the flattened grid.
    k, x_indices, y_indices
        Populated by `split_spectrum`; None before that.
    """

    def __init__(self, domain: Domain, n_modes: int):
        if n_modes < 1:
            raise ValueError("need at least one mode")
        self.domain = domain
        self.n_modes = int(n_modes)

        per_axis = self.n_modes  # candidate pool; the n smallest use indices < n
        qp = domain.quad_points if domain.quad_points is not None else 4 * per_axis
        qp = int(qp)
        if qp < 4 * per_axis:
            raise ValueError(
                f"quad_points={qp} is below the anti-aliasing floor 4*{per_axis}"
            )
        self.quad_points = qp

        axes = []
        for L in domain.lengths:
            x, w = _axis_nodes_weights(L, qp)
            c, dc = _axis_basis(L, x, per_axis - 1)
            axes.append((x, w, c, dc))
        self._axes = axes

        lam_axis = [
            np.array([(j * np.pi / L) ** 2 for j in range(per_axis)])
            for L in domain.lengths
        ]
        if domain.ndim == 1:
            cand = [((lam_axis[0][j],), (j,)) for j in range(per_axis)]
            modes = sorted(range(per_axis), key=lambda j: (lam_axis[0][j], j))
            modes = [(j,) for j in modes][: self.n_modes]
        else:
            pool = [
                (lam_axis[0][a] + lam_axis[1][b], (a, b))
                for a in range(per_axis)
                for b in range(per_axis)
            ]
            pool.sort(key=lambda t: (t[0], t[1]))
            modes = [m for _, m in pool[: self.n_modes]]

        if domain.ndim == 1:
            x, w, c, dc = axes[0]
            self.points = x[:, None]
            self.weights = w
            basis = np.stack([c[:, m[0]] for m in modes], axis=1)
            grads = [np.stack([dc[:, m[0]] for m in modes], axis=1)]
            eigs = np.array([lam_axis[0][m[0]] for m in modes])
        else:
            (x1, w1, c1, dc1), (x2, w2, c2, dc2) = axes
            X1, X2 = np.meshgrid(x1, x2, indexing="ij")
            self.points = np.stack([X1.ravel(), X2.ravel()], axis=1)
            self.weights = np.outer(w1, w2).ravel()
            basis = np.stack(
                [np.outer(c1[:, a], c2[:, b]).ravel() for a, b in modes], axis=1
            )
            grads = [
                np.stack(
                    [np.outer(dc1[:, a], c2[:, b]).ravel() for a, b in modes], axis=1
                ),
                np.stack(
                    [np.outer(c1[:, a], dc2[:, b]).ravel() for a, b in modes], axis=1
                ),
            ]
            eigs = np.array([lam_axis[0][a] + lam_axis[1][b] for a, b in modes])

        self.modes = [tuple(int(i) for i in m) for m in modes]
        self.eigenvalues = eigs
        self.basis = basis
        self.basis_grads = grads
        norm0 = 1.0 / np.sqrt(domain.measure)
        self.pairs = [
            EigenPair(
                index=i,
                eigenvalue=float(eigs[i]),
                mode=self.modes[i],
                norm_constant=float(
                    norm0 * np.prod([np.sqrt(2.0) if mi > 0 else 1.0 for mi in self.modes[i]])
                ),
            )
            for i in range(self.n_modes)
        ]
        # splitting data, filled by split_spectrum
        self.split_slope = None
        self.k = None
        self.x_indices = None
        self.y_indices = None

    # -- field operations ------------------------------------------------

    def evaluate(self, coeffs: np.ndarray) -> np.ndarray:
        """Values of the field on the quadrature grid."""
        return self.basis @ np.asarray(coeffs, dtype=float)

    def evaluate_gradient(self, coeffs: np.ndarray) -> list:
        """Per-axis spatial derivative values on the quadrature grid."""
        c = np.asarray(coeffs, dtype=float)
        return [g @ c for g in self.basis_grads]

    def project(self, values: np.ndarray) -> np.ndarray:
        """L2 projection of grid values onto the basis, as coefficients."""
        return self.basis.T @ (self.weights * np.asarray(values, dtype=float))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def constant_field(self, value: float) -> np.ndarray:
        c = np.zeros(self.n_modes)
        c[0] = float(value) * np.sqrt(self.domain.measure)
        return c

    def l2_inner(self, a, b) -> float:
        return float(np.dot(a, b))

    def l2_norm(self, a) -> float:
        return float(np.linalg.norm(a))

    def h1_inner(self, a, b) -> float:
        return float(np.sum((1.0 + self.eigenvalues) * np.asarray(a) * np.asarray(b)))

    def h1_norm(self, a) -> float:
        return float(np.sqrt(np.sum((1.0 + self.eigenvalues) * np.asarray(a) ** 2)))

    def h1_dist(self, a, b) -> float:
        return self.h1_norm(np.asarray(a) - np.asarray(b))

    def field_range(self, coeffs) -> tuple:
        vals = self.evaluate(coeffs)
        return float(vals.min()), float(vals.max())

    def evaluate_at(self, coeffs, points) -> np.ndarray:
        """Field values at arbitrary points (not just the quadrature grid)."""
        c = np.asarray(coeffs, dtype=float)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[0] == self.domain.ndim and pts.shape[1] != self.domain.ndim:
            pts = pts.T
        out = np.zeros(pts.shape[0])
        for i, pair in enumerate(self.pairs):
            if c[i] == 0.0:
                continue
            phi = np.full(pts.shape[0], pair.norm_constant)
            for ax, j in enumerate(pair.mode):
                if j > 0:
                    phi = phi * np.cos(j * np.pi * pts[:, ax] / self.domain.lengths[ax])
            out += c[i] * phi
        return out

    def mirror(self, coeffs, axis: int = 0) -> np.ndarray:
        """Coefficients of x -> u reflected across the midpoint of one axis.

        Reflection maps cos(j pi x / L) to (-1)^j times itself, so this is a
        sign flip on the odd modes of that axis.  Reflected critical points
        are again critical points on these symmetric domains.
        """
        c = np.asarray(coeffs, dtype=float).copy()
        for i, m in enumerate(self.modes):
            if m[axis] % 2 == 1:
                c[i] = -c[i]
        return c

    # -- splitting --------------------------------------------------------

    def x_projection(self, coeffs: np.ndarray) -> np.ndarray:
        self._need_split()
        out = np.zeros_like(np.asarray(coeffs, dtype=float))
        out[self.x_indices] = np.asarray(coeffs)[self.x_indices]
        return out

    def y_projection(self, coeffs: np.ndarray) -> np.ndarray:
        self._need_split()
        out = np.zeros_like(np.asarray(coeffs, dtype=float))
        out[self.y_indices] = np.asarray(coeffs)[self.y_indices]
        return out

    @property
    def lambda_max_x(self) -> float:
        self._need_split()
        if len(self.x_indices) == 0:
            raise ValueError("X block is empty")
        return float(self.eigenvalues[self.x_indices].max())

    @property
    def lambda_min_y(self) -> float:
        self._need_split()
        if len(self.y_indices) == 0:
            raise ValueError("Y block is empty")
        return float(self.eigenvalues[self.y_indices].min())

    def _need_split(self):
        if self.k is None:
            raise ValueError("spectrum has not been split; call split_spectrum first")

    def summary(self) -> dict:
        out = {
            "kind": self.domain.kind,
            "lengths": list(self.domain.lengths),
            "n_modes": self.n_modes,
            "quad_points": self.quad_points,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "modes": [list(m) for m in self.modes],
        }
        if self.k is not None:
            out["split_slope"] = self.split_slope
            out["k"] = self.k
            out["x_indices"] = [int(i) for i in self.x_indices]
            out["y_indices"] = [int(i) for i in self.y_indices]
        return out


def build_spectrum(domain: Domain, n_modes: int) -> SpectrumSlice:
    """Construct the first `n_modes` Neumann eigenpairs with transforms."""
    return SpectrumSlice(domain, n_modes)


def split_spectrum(spec: SpectrumSlice, slope: float, tol: float = 1e-8) -> SpectrumSlice:
    """Split the basis into X (eigenvalues below `slope`) and Y (the rest).

    Counting is strict and includes multiplicity.  Raises ResonantSlope if
    `slope` sits within `tol` of an eigenvalue, where the count would be
    ill-defined.  Returns a new slice; the input is untouched.
    """
    slope = float(slope)
    gaps = np.abs(spec.eigenvalues - slope)
    if np.any(gaps < tol):
        j = int(np.argmin(gaps))
        raise ResonantSlope(
            f"slope {slope} is within {tol} of eigenvalue {spec.eigenvalues[j]} (index {j})"
        )
    import copy

    out = copy.copy(spec)
    out.split_slope = slope
    below = spec.eigenvalues < slope
    out.k = int(np.count_nonzero(below))
    out.x_indices = np.nonzero(below)[0]
    out.y_indices = np.nonzero(~below)[0]
    return out
