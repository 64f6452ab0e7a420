# Property suites for the divergence theorems
from checks.base import CheckOutcome, PropertySuite
from checks.registry import SuiteRegistry, get_registry

__all__ = ['CheckOutcome', 'PropertySuite', 'SuiteRegistry', 'get_registry']
