# checks/base.py
# Base class for property suites

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from config.settings import TOL_THEOREM


@dataclass
class CheckOutcome:
    """Result of checking one case; details must be JSON-serializable"""
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, **self.details}


class PropertySuite(ABC):
    """A randomized property check.

    generate_case draws one case as plain JSON data; check_case re-derives
    everything from that data, so a stored case replays bit for bit.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Unique suite name used on the command line"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @property
    def default_tol(self) -> float:
        return TOL_THEOREM

    @abstractmethod
    def generate_case(self, rng: np.random.Generator) -> Dict[str, Any]:
        pass

    @abstractmethod
    def check_case(self, case: Dict[str, Any], tol: float) -> CheckOutcome:
        pass

    def __repr__(self) -> str:
        return f"PropertySuite({self.name})"
