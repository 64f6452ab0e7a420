# checks/cases.py
# Random inputs for the property suites, kept as plain JSON data

from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.settings import MAX_SUPPORT_SIZE, SUITE_GENERATORS, ZERO_ATOM_PROB
from core.measures import (
    DiscreteDistribution,
    JointDistribution,
    StochasticKernel,
    distribution_from_json,
    distribution_to_json,
    joint_from_json,
    joint_to_json,
    kernel_from_json,
    kernel_to_json,
)


def random_masses(rng: np.random.Generator, n: int, zero_prob: float = ZERO_ATOM_PROB) -> np.ndarray:
    """Dirichlet(1) masses with some atoms forced to zero (at least one stays positive)"""
    masses = rng.dirichlet(np.ones(n))
    if n > 1 and zero_prob > 0:
        zero = rng.random(n) < zero_prob
        if zero.all():
            zero[rng.integers(n)] = False
        masses[zero] = 0.0
    return masses / masses.sum()


def random_distribution(rng: np.random.Generator, n: Optional[int] = None,
                        zero_prob: float = ZERO_ATOM_PROB) -> DiscreteDistribution:
    n = n or int(rng.integers(1, MAX_SUPPORT_SIZE + 1))
    return DiscreteDistribution(tuple(range(n)), random_masses(rng, n, zero_prob))


def random_pair(rng: np.random.Generator, zero_prob: float = ZERO_ATOM_PROB):
    """P and Q on label sets that overlap but need not coincide"""
    n = int(rng.integers(1, MAX_SUPPORT_SIZE + 1))
    m = int(rng.integers(1, MAX_SUPPORT_SIZE + 1))
    shift = int(rng.integers(0, 2))
    P = random_distribution(rng, n, zero_prob)
    Q_base = random_distribution(rng, m, zero_prob)
    Q = DiscreteDistribution(tuple(l + shift for l in Q_base.labels), Q_base.masses)
    return P, Q


def random_joint(rng: np.random.Generator, shape: Optional[Sequence[int]] = None,
                 zero_prob: float = ZERO_ATOM_PROB) -> JointDistribution:
    if shape is None:
        shape = (int(rng.integers(1, MAX_SUPPORT_SIZE + 1)), int(rng.integers(1, MAX_SUPPORT_SIZE + 1)))
    m, n = shape
    pmf = random_masses(rng, m * n, zero_prob).reshape(m, n)
    return JointDistribution(tuple(range(m)), tuple(range(n)), pmf)


def random_kernel(rng: np.random.Generator, source: Sequence, n_targets: int,
                  zero_prob: float = ZERO_ATOM_PROB) -> StochasticKernel:
    rows = np.array([random_masses(rng, n_targets, zero_prob) for _ in source])
    return StochasticKernel(tuple(source), tuple(range(n_targets)), rows)


def random_map(rng: np.random.Generator, labels: Sequence, n_images: Optional[int] = None) -> Dict:
    n_images = n_images or int(rng.integers(1, max(len(labels), 1) + 1))
    return {l: int(rng.integers(n_images)) for l in labels}


def random_generator_name(rng: np.random.Generator, names: Sequence[str] = SUITE_GENERATORS) -> str:
    return str(names[int(rng.integers(len(names)))])


# ===================
# JSON round trips
# ===================

def map_to_json(phi: Dict) -> List[List[Any]]:
    """[[label, image], ...]; JSON object keys would turn int labels into strings"""
    return [[k, v] for k, v in phi.items()]


def map_from_json(data: List[List[Any]]) -> Dict:
    return {k: v for k, v in data}


dist_to_json = distribution_to_json
dist_from_json = distribution_from_json

__all__ = [
    "random_masses", "random_distribution", "random_pair", "random_joint",
    "random_kernel", "random_map", "random_generator_name",
    "map_to_json", "map_from_json", "dist_to_json", "dist_from_json",
    "joint_to_json", "joint_from_json", "kernel_to_json", "kernel_from_json",
]
