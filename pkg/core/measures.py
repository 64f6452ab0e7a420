# core/measures.py
# Finite discrete distributions, joints, stochastic kernels and push-forwards.
# Densities are taken w.r.t. the counting measure on the union support, so a
# density is the pmf itself.

from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import FIBER_TOL, MASS_TOL, RENORMALIZE_TOL
from core.errors import InputError, LabelMismatchError

Label = Hashable
LabelMap = Union[Callable[[Any], Any], Mapping[Any, Any]]

BOTH_POSITIVE = "both_positive"
P_ONLY = "p_only"
Q_ONLY = "q_only"
BOTH_ZERO = "both_zero"


def label_key(label):
    """Sort key that keeps mixed int/str label sets ordered deterministically."""
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    if isinstance(label, (int, float, np.integer, np.floating)) and not isinstance(label, bool):
        return (0, float(label), "")
    return (1, 0.0, str(label))


def _sorted_labels(labels) -> List[Label]:
    return sorted(labels, key=label_key)


def _as_map(phi: LabelMap) -> Callable[[Any], Any]:
    if callable(phi):
        return phi
    lookup = dict(phi)

    def mapped(label):
        if label not in lookup:
            raise InputError(f"map is not defined on label {label!r}")
        return lookup[label]
    return mapped


def _normalized(masses: np.ndarray, what: str) -> np.ndarray:
    """Check nonnegativity and total mass; renormalize rounding-level drift."""
    if masses.size == 0:
        raise InputError(f"{what}: empty support")
    if not np.all(np.isfinite(masses)):
        raise InputError(f"{what}: non-finite mass")
    if np.any(masses < 0):
        raise InputError(f"{what}: negative mass {masses.min()!r}")
    total = float(masses.sum())
    if abs(total - 1.0) > RENORMALIZE_TOL:
        raise InputError(f"{what}: masses sum to {total!r}, not 1")
    if total != 1.0:
        masses = masses / total
    return masses


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_distinct(labels: Sequence[Label], what: str):
    try:
        distinct = set(labels)
    except TypeError:
        raise InputError(f"{what}: labels must be hashable")
    if len(distinct) != len(labels):
        raise InputError(f"{what}: duplicate labels")


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """pmf over an ordered list of distinct labels; zero masses allowed"""
    labels: Tuple[Label, ...]
    masses: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        _check_distinct(labels, "distribution")
        masses = np.asarray(self.masses, dtype=float).ravel()
        if masses.size != len(labels):
            raise InputError("distribution: labels and masses differ in length")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "masses", _freeze(_normalized(masses, "distribution")))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[Label, float]]) -> "DiscreteDistribution":
        return cls(tuple(l for l, _ in pairs), np.array([m for _, m in pairs], dtype=float))

    @classmethod
    def from_dict(cls, masses: Mapping[Label, float]) -> "DiscreteDistribution":
        return cls.from_pairs(list(masses.items()))

    @classmethod
    def point_mass(cls, label: Label) -> "DiscreteDistribution":
        return cls((label,), np.array([1.0]))

    @classmethod
    def uniform(cls, labels: Sequence[Label]) -> "DiscreteDistribution":
        n = len(labels)
        return cls(tuple(labels), np.full(n, 1.0 / n))

    @classmethod
    def bernoulli(cls, p: float) -> "DiscreteDistribution":
        return cls((0, 1), np.array([1.0 - p, p]))

    def mass(self, label: Label) -> float:
        try:
            return float(self.masses[self.labels.index(label)])
        except ValueError:
            return 0.0

    def support(self) -> Tuple[Label, ...]:
        return tuple(l for l, m in zip(self.labels, self.masses) if m > 0)

    def as_dict(self) -> Dict[Label, float]:
        return OrderedDict((l, float(m)) for l, m in zip(self.labels, self.masses))

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.masses, other.masses)

    def allclose(self, other: "DiscreteDistribution", tol: float = MASS_TOL) -> bool:
        """Same masses on the union support (zero atoms ignored)"""
        pair = align(self, other)
        return bool(np.all(np.abs(pair.p - pair.q) <= tol))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """pmf[i, j] = P(X = x_i, Y = y_j)"""
    x_labels: Tuple[Label, ...]
    y_labels: Tuple[Label, ...]
    pmf: np.ndarray

    def __post_init__(self):
        xs, ys = tuple(self.x_labels), tuple(self.y_labels)
        _check_distinct(xs, "joint x")
        _check_distinct(ys, "joint y")
        pmf = np.asarray(self.pmf, dtype=float)
        if pmf.shape != (len(xs), len(ys)):
            raise InputError(f"joint: pmf shape {pmf.shape} does not match {len(xs)}x{len(ys)} labels")
        pmf = _normalized(pmf, "joint")
        object.__setattr__(self, "x_labels", xs)
        object.__setattr__(self, "y_labels", ys)
        object.__setattr__(self, "pmf", _freeze(pmf))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pmf.shape

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return (self.x_labels == other.x_labels and self.y_labels == other.y_labels
                and np.array_equal(self.pmf, other.pmf))


@dataclass(frozen=True, eq=False)
class StochasticKernel:
    """Row i is K(x_i, .). Rows with usable=False are undefined and hold NaN."""
    source_labels: Tuple[Label, ...]
    target_labels: Tuple[Label, ...]
    rows: np.ndarray
    usable: Optional[Tuple[bool, ...]] = None

    def __post_init__(self):
        src, tgt = tuple(self.source_labels), tuple(self.target_labels)
        _check_distinct(src, "kernel source")
        _check_distinct(tgt, "kernel target")
        rows = np.asarray(self.rows, dtype=float)
        if rows.shape != (len(src), len(tgt)):
            raise InputError(f"kernel: rows shape {rows.shape} does not match {len(src)}x{len(tgt)} labels")
        usable = tuple(bool(u) for u in self.usable) if self.usable is not None else (True,) * len(src)
        if len(usable) != len(src):
            raise InputError("kernel: usable mask has the wrong length")
        rows = rows.copy()
        for i, ok in enumerate(usable):
            if ok:
                rows[i] = _normalized(rows[i], f"kernel row {src[i]!r}")
            else:
                rows[i] = np.nan
        object.__setattr__(self, "source_labels", src)
        object.__setattr__(self, "target_labels", tgt)
        object.__setattr__(self, "rows", _freeze(rows))
        object.__setattr__(self, "usable", usable)

    @classmethod
    def identity(cls, labels: Sequence[Label]) -> "StochasticKernel":
        return cls(tuple(labels), tuple(labels), np.eye(len(labels)))

    @classmethod
    def constant(cls, source: Sequence[Label], row: DiscreteDistribution) -> "StochasticKernel":
        return cls(tuple(source), row.labels, np.tile(row.masses, (len(source), 1)))

    def row(self, label: Label) -> DiscreteDistribution:
        i = self.source_labels.index(label)
        if not self.usable[i]:
            raise InputError(f"kernel row {label!r} is undefined (zero-mass source atom)")
        return DiscreteDistribution(self.target_labels, self.rows[i])

    def rows_for(self, labels: Sequence[Label]) -> np.ndarray:
        """Rows reordered to `labels`; every label must be a source label."""
        missing = [l for l in labels if l not in self.source_labels]
        if missing:
            raise LabelMismatchError(f"kernel has no row for labels {missing!r}")
        return np.array([self.rows[self.source_labels.index(l)] for l in labels])

    def __eq__(self, other):
        if not isinstance(other, StochasticKernel):
            return NotImplemented
        return (self.source_labels == other.source_labels
                and self.target_labels == other.target_labels
                and self.usable == other.usable
                and np.array_equal(self.rows, other.rows, equal_nan=True))


@dataclass(frozen=True, eq=False)
class DensityPair:
    """p and q on the union support, with the Lebesgue-decomposition class of each label"""
    labels: Tuple[Label, ...]
    p: np.ndarray
    q: np.ndarray
    classes: Tuple[str, ...]

    def swapped(self) -> "DensityPair":
        flip = {P_ONLY: Q_ONLY, Q_ONLY: P_ONLY}
        return DensityPair(self.labels, self.q, self.p, tuple(flip.get(c, c) for c in self.classes))

    @property
    def singular_mass(self) -> float:
        """P(dP/dQ = +inf)"""
        return float(self.p[self.q == 0].sum())

    @property
    def mutually_singular(self) -> bool:
        return all(c in (P_ONLY, Q_ONLY, BOTH_ZERO) for c in self.classes)


def classify(p: float, q: float) -> str:
    if p > 0 and q > 0:
        return BOTH_POSITIVE
    if p > 0:
        return P_ONLY
    if q > 0:
        return Q_ONLY
    return BOTH_ZERO


def align(P: DiscreteDistribution, Q: DiscreteDistribution) -> DensityPair:
    """Put P and Q on the sorted union of their label sets"""
    labels = _sorted_labels(set(P.labels) | set(Q.labels))
    pm, qm = P.as_dict(), Q.as_dict()
    p = np.array([pm.get(l, 0.0) for l in labels])
    q = np.array([qm.get(l, 0.0) for l in labels])
    classes = tuple(classify(a, b) for a, b in zip(p, q))
    return DensityPair(tuple(labels), _freeze(p), _freeze(q), classes)


def pushforward_map(P: DiscreteDistribution, phi: LabelMap) -> DiscreteDistribution:
    """Image measure: mass of l is the P-mass of phi^{-1}(l)"""
    fn = _as_map(phi)
    acc: Dict[Label, List[float]] = {}
    for label, m in zip(P.labels, P.masses):
        acc.setdefault(fn(label), []).append(float(m))
    labels = _sorted_labels(acc)
    return DiscreteDistribution(tuple(labels), np.array([np.sum(acc[l]) for l in labels]))


def pushforward_kernel(P: DiscreteDistribution, K: StochasticKernel) -> DiscreteDistribution:
    """y -> sum_i P(x_i) K(x_i, y)"""
    support = P.support()
    rows = K.rows_for(support)
    if np.any(np.isnan(rows)):
        raise LabelMismatchError("kernel row undefined on the support of P")
    weights = np.array([P.mass(l) for l in support])
    return DiscreteDistribution(K.target_labels, weights @ rows)


def product(PX: DiscreteDistribution, PY: DiscreteDistribution) -> JointDistribution:
    return JointDistribution(PX.labels, PY.labels, np.outer(PX.masses, PY.masses))


def marginals(J: JointDistribution) -> Tuple[DiscreteDistribution, DiscreteDistribution]:
    return (DiscreteDistribution(J.x_labels, J.pmf.sum(axis=1)),
            DiscreteDistribution(J.y_labels, J.pmf.sum(axis=0)))


def conditionals(J: JointDistribution) -> StochasticKernel:
    """P_{Y|X}; rows at zero-mass x are flagged unusable"""
    px = J.pmf.sum(axis=1)
    usable = tuple(bool(m > 0) for m in px)
    rows = np.full(J.shape, np.nan)
    for i, ok in enumerate(usable):
        if ok:
            rows[i] = J.pmf[i] / px[i]
    return StochasticKernel(J.x_labels, J.y_labels, rows, usable)


def reconstruct(PX: DiscreteDistribution, K: StochasticKernel) -> JointDistribution:
    """J(x, y) = P_X(x) K(x, y); unusable rows must carry zero mass"""
    pmf = np.zeros((len(PX), len(K.target_labels)))
    for i, label in enumerate(PX.labels):
        m = PX.masses[i]
        if m == 0:
            continue
        row = K.rows_for([label])[0]
        if np.any(np.isnan(row)):
            raise LabelMismatchError(f"kernel row {label!r} undefined but P_X({label!r}) > 0")
        pmf[i] = m * row
    return JointDistribution(PX.labels, K.target_labels, pmf)


def markov_compose(J_xy: JointDistribution, K_z_given_y: StochasticKernel) -> JointDistribution:
    """Joint of (X, Z) when Z depends on (X, Y) only through Y"""
    rows = K_z_given_y.rows_for(J_xy.y_labels)
    py = J_xy.pmf.sum(axis=0)
    bad = [y for y, m, r in zip(J_xy.y_labels, py, rows) if m > 0 and np.any(np.isnan(r))]
    if bad:
        raise LabelMismatchError(f"kernel rows undefined for charged Y labels {bad!r}")
    rows = np.nan_to_num(rows, nan=0.0)
    return JointDistribution(J_xy.x_labels, K_z_given_y.target_labels, J_xy.pmf @ rows)


def markov_triple(J_xy: JointDistribution, K_z_given_y: StochasticKernel) -> DiscreteDistribution:
    """pmf(x, y, z) = J(x, y) K(y, z) over (x, y, z) labels in row-major order"""
    rows = np.nan_to_num(K_z_given_y.rows_for(J_xy.y_labels), nan=0.0)
    cube = J_xy.pmf[:, :, None] * rows[None, :, :]
    labels = tuple((x, y, z) for x in J_xy.x_labels for y in J_xy.y_labels
                   for z in K_z_given_y.target_labels)
    return DiscreteDistribution(labels, cube.ravel())


def transpose(J: JointDistribution) -> JointDistribution:
    return JointDistribution(J.y_labels, J.x_labels, J.pmf.T)


def flatten(J: JointDistribution) -> DiscreteDistribution:
    """Joint as a distribution over (x, y) labels, row-major"""
    labels = tuple((x, y) for x in J.x_labels for y in J.y_labels)
    return DiscreteDistribution(labels, J.pmf.ravel())


def joint_pushforward(J: JointDistribution, phi_x: LabelMap, phi_y: LabelMap) -> JointDistribution:
    """Law of (phi_x(X), phi_y(Y))"""
    fx, fy = _as_map(phi_x), _as_map(phi_y)
    img_x = [fx(x) for x in J.x_labels]
    img_y = [fy(y) for y in J.y_labels]
    xs = _sorted_labels(set(img_x))
    ys = _sorted_labels(set(img_y))
    ix = np.array([xs.index(v) for v in img_x])
    iy = np.array([ys.index(v) for v in img_y])
    pmf = np.zeros((len(xs), len(ys)))
    np.add.at(pmf, (ix[:, None], iy[None, :]), J.pmf)
    return JointDistribution(tuple(xs), tuple(ys), pmf)


def augment_independent(J: JointDistribution, PU: DiscreteDistribution) -> JointDistribution:
    """Joint of ((X, U), Y) with U independent of (X, Y)"""
    labels = tuple((x, u) for x in J.x_labels for u in PU.labels)
    pmf = (J.pmf[:, None, :] * PU.masses[None, :, None]).reshape(len(labels), len(J.y_labels))
    return JointDistribution(labels, J.y_labels, pmf)


def is_injective(phi: LabelMap, labels: Sequence[Label]) -> bool:
    fn = _as_map(phi)
    images = [fn(l) for l in labels]
    return len(set(images)) == len(images)


def is_fiber_constant(P: DiscreteDistribution, Q: DiscreteDistribution, phi: LabelMap,
                      tol: float = FIBER_TOL) -> bool:
    """dP/dQ is a function of phi: on each fiber the labels charged by P + Q
    either all have q = 0, all have p = 0, or share one ratio p/q."""
    fn = _as_map(phi)
    pair = align(P, Q)
    fibers: Dict[Label, List[Tuple[float, float]]] = {}
    for label, p, q in zip(pair.labels, pair.p, pair.q):
        if p == 0 and q == 0:
            continue
        fibers.setdefault(fn(label), []).append((float(p), float(q)))
    for members in fibers.values():
        if all(q == 0 for _, q in members):
            continue
        if any(q == 0 for _, q in members):
            return False
        ratios = [p / q for p, q in members]
        ref = ratios[0]
        if any(abs(r - ref) > tol * max(1.0, abs(ref)) for r in ratios):
            return False
    return True


# ===================
# JSON codecs
# ===================

def distribution_from_json(data: Mapping) -> DiscreteDistribution:
    """{"atoms": [{"label": <string>, "p": <float>}, ...]}"""
    try:
        atoms = data["atoms"]
        pairs = [(a["label"], float(a["p"])) for a in atoms]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed distribution: {e}")
    _check_json_labels([l for l, _ in pairs], "distribution")
    return DiscreteDistribution.from_pairs(pairs)


def distribution_to_json(P: DiscreteDistribution) -> Dict:
    return {"atoms": [{"label": _json_label(l), "p": float(m)} for l, m in zip(P.labels, P.masses)]}


def joint_from_json(data: Mapping) -> JointDistribution:
    """{"x": [...], "y": [...], "pmf": [[...], ...]}"""
    try:
        xs, ys = list(data["x"]), list(data["y"])
        pmf = np.array(data["pmf"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed joint: {e}")
    _check_json_labels(xs + ys, "joint")
    return JointDistribution(tuple(xs), tuple(ys), pmf)


def joint_to_json(J: JointDistribution) -> Dict:
    return {"x": [_json_label(l) for l in J.x_labels],
            "y": [_json_label(l) for l in J.y_labels],
            "pmf": J.pmf.tolist()}


def kernel_from_json(data: Mapping) -> StochasticKernel:
    """{"source": [...], "target": [...], "rows": [[...], ...]}"""
    try:
        src, tgt = list(data["source"]), list(data["target"])
        rows = np.array(data["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed kernel: {e}")
    _check_json_labels(src + tgt, "kernel")
    return StochasticKernel(tuple(src), tuple(tgt), rows)


def kernel_to_json(K: StochasticKernel) -> Dict:
    return {"source": [_json_label(l) for l in K.source_labels],
            "target": [_json_label(l) for l in K.target_labels],
            "rows": np.nan_to_num(K.rows, nan=0.0).tolist()}


def _check_json_labels(labels: List[Any], what: str):
    """Labels in files are strings or numbers"""
    for label in labels:
        if isinstance(label, bool) or not isinstance(label, (str, int, float)):
            raise InputError(f"malformed {what}: label {label!r} is not a string or number")


def _json_label(label):
    if isinstance(label, tuple):
        return "|".join(str(_json_label(x)) for x in label)
    if isinstance(label, (np.integer,)):
        return int(label)
    return label
