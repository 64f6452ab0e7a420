# core/copulas.py
# Step cdfs, checkerboard grid copulas, the FGM family and the copula
# minimality check.
#
# A GridCopula stores its cell widths rather than its breakpoints: the widths
# of a checkerboard are the marginal masses of J bit for bit, which keeps
# grid_divergence(checkerboard(J)) identical to csiszar_index(J).

import bisect
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import (
    COARSEN_TOL,
    FGM_GRID_SIZE,
    MASS_TOL,
    QUADRATURE_CONVERGENCE_TOL,
    QUADRATURE_GRADING,
    QUADRATURE_MIN_ORDER,
    QUADRATURE_ORDER,
    TOL_ALGEBRAIC,
    TOL_THEOREM,
)
from core.divergence import divergence_from_densities
from core.errors import ConstraintError, InputError, InvalidCandidateError
from core.extreal import ExtReal, ext_le
from core.generators import Generator
from core.measures import DiscreteDistribution, JointDistribution, Label, label_key
from core.quadrature import integrate_unit_square


# ===================
# Step cdfs
# ===================

@dataclass(frozen=True, eq=False)
class StepCdf:
    """cdf of a finite distribution; only atoms with positive mass are kept"""
    breakpoints: Tuple[Label, ...]
    cum: np.ndarray
    left_limits: np.ndarray

    @classmethod
    def from_distribution(cls, P: DiscreteDistribution) -> "StepCdf":
        atoms = sorted(((l, float(m)) for l, m in zip(P.labels, P.masses) if m > 0),
                       key=lambda a: label_key(a[0]))
        masses = np.array([m for _, m in atoms])
        cum = np.cumsum(masses)
        cum[-1] = 1.0
        return cls(tuple(l for l, _ in atoms), cum, cum - masses)

    def __call__(self, s) -> float:
        """F(s) = P(Z <= s)"""
        keys = [label_key(b) for b in self.breakpoints]
        i = bisect.bisect_right(keys, label_key(s))
        return 0.0 if i == 0 else float(self.cum[i - 1])


def generalized_inverse(F: StepCdf, t: float):
    """inf{s : F(s) >= t}; t = 0 gives -inf (inf of the reals)"""
    if not 0.0 <= t <= 1.0:
        raise InputError(f"generalized_inverse needs t in [0, 1], got {t!r}")
    if t == 0.0:
        return -math.inf
    i = int(np.searchsorted(F.cum, t, side="left"))
    return F.breakpoints[min(i, len(F.breakpoints) - 1)]


# ===================
# Grid copulas
# ===================

def _breaks(widths: np.ndarray) -> np.ndarray:
    out = np.concatenate([[0.0], np.cumsum(widths)])
    out[-1] = 1.0
    return out


def _clip_fraction(x, lo: np.ndarray, width: np.ndarray) -> np.ndarray:
    return np.clip((x - lo) / width, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class GridCopula:
    """Piecewise-constant copula: cell (i, j) spans u_widths[i] x v_widths[j]
    and carries cell_mass[i, j]. Row sums match u_widths, column sums v_widths."""
    u_widths: np.ndarray
    v_widths: np.ndarray
    cell_mass: np.ndarray

    def __post_init__(self):
        a = np.array(self.u_widths, dtype=float)
        b = np.array(self.v_widths, dtype=float)
        r = np.array(self.cell_mass, dtype=float)
        if r.shape != (a.size, b.size):
            raise InputError(f"grid copula: cell_mass shape {r.shape} does not match {a.size}x{b.size} widths")
        if np.any(a <= 0) or np.any(b <= 0):
            raise InputError("grid copula: cell widths must be positive")
        if np.any(r < 0) or not np.all(np.isfinite(r)):
            raise InputError("grid copula: cell masses must be finite and nonnegative")
        if abs(a.sum() - 1.0) > MASS_TOL * a.size or abs(b.sum() - 1.0) > MASS_TOL * b.size:
            raise InputError("grid copula: widths must add up to 1")
        if (np.max(np.abs(r.sum(axis=1) - a)) > MASS_TOL
                or np.max(np.abs(r.sum(axis=0) - b)) > MASS_TOL):
            raise InputError("grid copula: marginals are not uniform")
        for arr, attr in ((a, "u_widths"), (b, "v_widths"), (r, "cell_mass")):
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cell_mass.shape

    @property
    def u_breaks(self) -> np.ndarray:
        return _breaks(self.u_widths)

    @property
    def v_breaks(self) -> np.ndarray:
        return _breaks(self.v_widths)

    def density(self) -> np.ndarray:
        return self.cell_mass / np.outer(self.u_widths, self.v_widths)

    def cdf(self, u: float, v: float) -> float:
        su = _clip_fraction(u, self.u_breaks[:-1], self.u_widths)
        sv = _clip_fraction(v, self.v_breaks[:-1], self.v_widths)
        return float(su @ self.cell_mass @ sv)

    def coarsen(self, u_breaks: Sequence[float], v_breaks: Sequence[float]) -> "GridCopula":
        """Merge cells onto a coarser grid whose breaks are breaks of this one"""
        iu = _match_breaks(self.u_breaks, np.asarray(u_breaks, dtype=float), "u")
        iv = _match_breaks(self.v_breaks, np.asarray(v_breaks, dtype=float), "v")
        rows = np.add.reduceat(self.cell_mass, iu[:-1], axis=0)
        cells = np.add.reduceat(rows, iv[:-1], axis=1)
        return GridCopula(np.add.reduceat(self.u_widths, iu[:-1]),
                          np.add.reduceat(self.v_widths, iv[:-1]),
                          cells)

    def to_frame(self) -> pd.DataFrame:
        """One row per cell: i, j, u_lo, u_hi, v_lo, v_hi, mass, density"""
        ub, vb = self.u_breaks, self.v_breaks
        dens = self.density()
        m, n = self.shape
        i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
        i, j = i.ravel(), j.ravel()
        return pd.DataFrame({
            "i": i,
            "j": j,
            "u_lo": ub[i],
            "u_hi": ub[i + 1],
            "v_lo": vb[j],
            "v_hi": vb[j + 1],
            "mass": self.cell_mass[i, j],
            "density": dens[i, j],
        })

    @classmethod
    def independence(cls, u_widths: Sequence[float], v_widths: Sequence[float]) -> "GridCopula":
        a = np.asarray(u_widths, dtype=float)
        b = np.asarray(v_widths, dtype=float)
        return cls(a, b, np.outer(a, b))


def _match_breaks(fine: np.ndarray, coarse: np.ndarray, axis: str) -> np.ndarray:
    if coarse[0] != 0.0 or abs(coarse[-1] - 1.0) > COARSEN_TOL or np.any(np.diff(coarse) <= 0):
        raise InvalidCandidateError(f"coarse {axis} breaks must increase from 0 to 1")
    idx = np.searchsorted(fine, coarse)
    out = []
    for c, k in zip(coarse, idx):
        near = [j for j in (k - 1, k) if 0 <= j < fine.size]
        best = min(near, key=lambda j: abs(fine[j] - c))
        if abs(fine[best] - c) > COARSEN_TOL:
            raise InvalidCandidateError(f"{axis} break {c!r} is not a break of the fine grid")
        out.append(best)
    return np.array(out)


def checkerboard(J: JointDistribution) -> GridCopula:
    """Spread each atom's mass uniformly over its cdf cell; zero-mass atoms dropped"""
    px = J.pmf.sum(axis=1)
    py = J.pmf.sum(axis=0)
    kx = px > 0
    ky = py > 0
    return GridCopula(px[kx], py[ky], J.pmf[np.ix_(kx, ky)])


def grid_divergence(C: GridCopula, g: Generator) -> ExtReal:
    """D_f(Pi || C) for a piecewise-constant C"""
    product = np.outer(C.u_widths, C.v_widths)
    return divergence_from_densities(product.ravel(), C.cell_mass.ravel(), g).value


# ===================
# Interpolating copulas
# ===================

SCHEME_MODES = ("shared", "independent", "antithetic")


@dataclass(frozen=True)
class RandomizationScheme:
    """How the uniform randomizers of the atoms are drawn.

    shared: one T for X and one W for Y (the checkerboard copula)
    independent: one T_x per X-atom and one W_y per Y-atom
    antithetic: one T per sample, W = 1 - T
    """
    mode: str = "shared"

    def __post_init__(self):
        if self.mode not in SCHEME_MODES:
            raise InputError(f"unknown randomization scheme '{self.mode}'; choose from {', '.join(SCHEME_MODES)}")


def interpolating_cdf(J: JointDistribution, scheme: RandomizationScheme, u: float, v: float) -> float:
    """C(u, v) of the interpolating copula of J.

    shared / independent: sum J s_x(u) w_y(v)   (the checkerboard)
    antithetic:           sum J (s_x(u) + w_y(v) - 1)_+
    where s_x, w_y are the clipped relative positions inside the atom cells.
    """
    C = checkerboard(J)
    su = _clip_fraction(u, C.u_breaks[:-1], C.u_widths)
    sv = _clip_fraction(v, C.v_breaks[:-1], C.v_widths)
    if scheme.mode == "antithetic":
        return float(np.sum(C.cell_mass * np.maximum(su[:, None] + sv[None, :] - 1.0, 0.0)))
    return float(su @ C.cell_mass @ sv)


# ===================
# FGM family
# ===================

@dataclass(frozen=True)
class FgmCopula:
    """C(u, v) = uv (1 + theta (1 - u)(1 - v)), theta in [-1, 1]"""
    theta: float

    def __post_init__(self):
        if not -1.0 <= self.theta <= 1.0:
            raise ConstraintError(f"FGM parameter must lie in [-1, 1], got {self.theta!r}")

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = u * v * (1.0 + self.theta * (1.0 - u) * (1.0 - v))
        return float(out) if out.ndim == 0 else out

    def density(self, u, v, uc=None, vc=None):
        """1 + theta (1 - 2u)(1 - 2v), written as a sum of nonnegative terms.

        uc, vc are 1 - u and 1 - v when the caller has them more accurately.
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        uc = 1.0 - u if uc is None else np.asarray(uc, dtype=float)
        vc = 1.0 - v if vc is None else np.asarray(vc, dtype=float)
        th = self.theta
        if th >= 0:
            # 1 + ab = 2 (uc vc + u v)
            out = (1.0 - th) + 2.0 * th * (uc * vc + u * v)
        else:
            # 1 - ab = 2 (u vc + uc v)
            out = (1.0 + th) - 2.0 * th * (u * vc + uc * v)
        return float(out) if out.ndim == 0 else out


def fgm_fit_bernoulli(p: float, q: float, r: float) -> FgmCopula:
    """FGM copula with C(1 - p, 1 - q) = 1 - p - q + r"""
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        raise ConstraintError(f"p and q must lie in (0, 1), got p={p!r}, q={q!r}")
    if not max(p + q - 1.0, 0.0) < r < min(p, q):
        raise ConstraintError(f"r={r!r} violates (p + q - 1)_+ < r < min(p, q)")
    theta = (r - p * q) / (p * q * (1.0 - p) * (1.0 - q))
    if not -1.0 - TOL_ALGEBRAIC <= theta <= 1.0 + TOL_ALGEBRAIC:
        raise ConstraintError(f"fitted theta={theta!r} lies outside [-1, 1]")
    C = FgmCopula(min(max(theta, -1.0), 1.0))
    rho = 1.0 - p - q + r
    if abs(C.cdf(1.0 - p, 1.0 - q) - rho) > TOL_ALGEBRAIC:
        raise ConstraintError("FGM fit does not reproduce P(X=0, Y=0)")
    return C


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    coarse_value: float
    difference: float
    converged: bool


def _fgm_integral(C: FgmCopula, g: Generator, order: int) -> float:
    def integrand(u, uc, v, vc):
        c = C.density(u, v, uc, vc)
        return g(1.0 / c) * c
    return integrate_unit_square(integrand, order, QUADRATURE_GRADING)


def fgm_divergence_quadrature(C: FgmCopula, g: Generator,
                              order: int = QUADRATURE_ORDER) -> QuadratureResult:
    """D_f(Pi || C_theta) = int g(1/c) c du dv, checked against order/2"""
    if order < QUADRATURE_MIN_ORDER:
        raise InputError(f"quadrature order must be >= {QUADRATURE_MIN_ORDER}, got {order}")
    if C.theta == 0.0:
        return QuadratureResult(0.0, 0.0, 0.0, True)
    value = _fgm_integral(C, g, order)
    coarse = _fgm_integral(C, g, order // 2)
    diff = abs(value - coarse)
    return QuadratureResult(value, coarse, diff, diff <= QUADRATURE_CONVERGENCE_TOL)


def fgm_grid(theta: float, n: int = FGM_GRID_SIZE) -> GridCopula:
    """FGM copula discretized on an n x n uniform grid (masses from the cdf)"""
    if n < 1:
        raise InputError(f"grid size must be positive, got {n}")
    C = FgmCopula(theta)
    t = np.linspace(0.0, 1.0, n + 1)
    F = C.cdf(t[:, None], t[None, :])
    mass = np.diff(np.diff(F, axis=0), axis=1)
    mass = np.maximum(mass, 0.0)
    widths = np.full(n, 1.0 / n)
    return GridCopula(widths, widths, mass)


# ===================
# Minimality
# ===================

def random_refinement(C: GridCopula, k: int, rng: np.random.Generator) -> GridCopula:
    """Split every cell k x k; sub-cell masses r/k^2 (1 + delta) where delta has
    zero row and column sums, so marginals stay uniform and the coarsening is C."""
    if k < 1:
        raise InputError(f"refinement factor must be positive, got {k}")
    m, n = C.shape
    fine = np.empty((m * k, n * k))
    for i in range(m):
        for j in range(n):
            delta = rng.normal(size=(k, k))
            delta -= delta.mean(axis=0, keepdims=True)
            delta -= delta.mean(axis=1, keepdims=True)
            peak = np.max(np.abs(delta))
            if peak > 0:
                delta *= rng.uniform(0.0, 1.0) / peak
            fine[i * k:(i + 1) * k, j * k:(j + 1) * k] = C.cell_mass[i, j] / (k * k) * (1.0 + delta)
    return GridCopula(np.repeat(C.u_widths / k, k), np.repeat(C.v_widths / k, k), fine)


def _check_candidate(base: GridCopula, candidate: GridCopula):
    coarse = candidate.coarsen(base.u_breaks, base.v_breaks)
    if np.max(np.abs(coarse.cell_mass - base.cell_mass)) > COARSEN_TOL:
        raise InvalidCandidateError("candidate does not coarsen to the cell masses of J")


def minimality_check(J: JointDistribution, candidates: List[GridCopula], g: Generator,
                     tol: float = TOL_THEOREM) -> bool:
    """True iff the checkerboard divergence is <= every candidate's (within tol)"""
    base = checkerboard(J)
    floor = grid_divergence(base, g)
    for cand in candidates:
        _check_candidate(base, cand)
    return all(ext_le(floor, grid_divergence(c, g), tol) for c in candidates)


def jensen_coarsening(C: GridCopula, u_breaks: Sequence[float], v_breaks: Sequence[float],
                      g: Generator, tol: float = TOL_THEOREM) -> Tuple[ExtReal, ExtReal, bool]:
    """(fine, coarse, coarse <= fine): averaging the density never increases D_f(Pi || .)"""
    fine = grid_divergence(C, g)
    coarse = grid_divergence(C.coarsen(u_breaks, v_breaks), g)
    return fine, coarse, ext_le(coarse, fine, tol)
