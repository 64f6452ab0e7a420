# checks/registry.py
# Suite registry - name lookup with suggestions

import difflib
from typing import Dict, List

from checks.base import PropertySuite
from core.errors import UnknownSuiteError


class SuiteRegistry:
    """Registry of property suites"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._suites = {}
        return cls._instance

    def register(self, suite: PropertySuite) -> None:
        self._suites[suite.name] = suite

    def get(self, name: str) -> PropertySuite:
        """Suite by name; unknown names raise with close matches"""
        suite = self._suites.get(name)
        if suite is None:
            similar = difflib.get_close_matches(name, self.list_suites(), n=3)
            raise UnknownSuiteError(name, similar)
        return suite

    def list_suites(self) -> List[str]:
        return list(self._suites.keys())

    def describe(self) -> Dict[str, str]:
        return {name: suite.description for name, suite in self._suites.items()}


# Global registry instance
registry = SuiteRegistry()


def get_registry() -> SuiteRegistry:
    """Global registry with the built-in suites registered (idempotent)"""
    if not registry.list_suites():
        from checks.generator_suites import register_generator_suites
        from checks.divergence_suites import register_divergence_suites
        from checks.csiszar_suites import register_csiszar_suites
        from checks.copula_suites import register_copula_suites

        register_generator_suites()
        register_divergence_suites()
        register_csiszar_suites()
        register_copula_suites()
    return registry
