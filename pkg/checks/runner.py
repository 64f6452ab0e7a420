# checks/runner.py
# Runs a property suite over many random trials with a worker pool.
# Trial i draws from SeedSequence([seed, i]), so results do not depend on the
# number of workers or on the order in which trials finish.

import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from checks.base import CheckOutcome, PropertySuite
from checks.registry import get_registry
from config.settings import CHECK_WORKERS
from core.errors import InputError
from utils.logger import get_logger


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


@dataclass
class TrialResult:
    trial: int
    case: Dict[str, Any]
    outcome: CheckOutcome


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    tol: float
    failures: int = 0
    first_failure: Optional[TrialResult] = None
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> Dict[str, Any]:
        """Summary on success; on failure the lowest failing trial, re-runnable via --replay"""
        out = {"suite": self.suite, "seed": self.seed, "trials": self.trials, "tol": self.tol,
               "passed": self.passed, "failures": self.failures}
        if self.first_failure is not None:
            out["trial"] = self.first_failure.trial
            out["case"] = self.first_failure.case
            out["outcome"] = self.first_failure.outcome.to_dict()
        return out


class SuiteRunner:
    """Fan trials of one suite out to a thread pool"""

    def __init__(self, workers: int = CHECK_WORKERS, progress: bool = True):
        self.workers = max(1, int(workers))
        self.progress = progress

    def _run_trial(self, suite: PropertySuite, seed: int, trial: int, tol: float) -> TrialResult:
        case = suite.generate_case(trial_rng(seed, trial))
        return TrialResult(trial, case, suite.check_case(case, tol))

    def run(self, suite: PropertySuite, trials: int, seed: int, tol: Optional[float] = None) -> SuiteReport:
        if trials < 1:
            raise InputError(f"trials must be >= 1, got {trials}")
        tol = suite.default_tol if tol is None else float(tol)
        start = time.time()
        logger = get_logger()
        logger.log_info(f"suite {suite.name}: {trials} trials, seed {seed}, tol {tol:g}")

        failed: List[TrialResult] = []
        if self.workers == 1:
            for i in range(trials):
                r = self._run_trial(suite, seed, i, tol)
                if not r.outcome.passed:
                    failed.append(r)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                futures = [executor.submit(self._run_trial, suite, seed, i, tol) for i in range(trials)]
                for future in as_completed(futures):
                    r = future.result()
                    if not r.outcome.passed:
                        failed.append(r)

        report = SuiteReport(suite.name, int(seed), trials, tol, duration=time.time() - start)
        if failed:
            report.failures = len(failed)
            report.first_failure = min(failed, key=lambda r: r.trial)
            logger.log_counterexample(report.to_dict())
        logger.log_suite(suite.name, trials, report.failures, report.duration)

        if self.progress:
            mark = "ok" if report.passed else f"FAILED ({report.failures})"
            print(f"  {suite.name}: {trials} trials {mark} [{report.duration:.2f}s]", file=sys.stderr)
        return report


def replay(report: Dict[str, Any]) -> SuiteReport:
    """Re-check the case stored in a failure report"""
    for key in ("suite", "seed", "trial", "tol", "case"):
        if key not in report:
            raise InputError(f"replay report has no '{key}' field")
    suite = get_registry().get(report["suite"])
    start = time.time()
    outcome = suite.check_case(report["case"], float(report["tol"]))
    result = SuiteReport(suite.name, int(report["seed"]), 1, float(report["tol"]),
                         duration=time.time() - start)
    if not outcome.passed:
        result.failures = 1
        result.first_failure = TrialResult(int(report["trial"]), report["case"], outcome)
    get_logger().log_suite(suite.name, 1, result.failures, result.duration, replay=True)
    return result
