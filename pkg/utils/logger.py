# utils/logger.py
# Session logger - one JSON file per CLI run with the phase events of the run

import glob
import json
import os
import threading
from datetime import datetime
from typing import Any, Dict, List, Optional

from config.settings import MAX_SESSIONS_SAVED, OUTPUT_DIR, SESSION_LOGGING


class RunLogger:
    """Records run events to outputs/sessions/session_<id>.json.

    Never writes to stdout; stdout carries the report only.
    With persist=False the events stay in memory.
    """

    MAX_SESSIONS = MAX_SESSIONS_SAVED

    def __init__(self, persist: Optional[bool] = None, output_dir: Optional[str] = None):
        self.session_id = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        self.persist = SESSION_LOGGING if persist is None else persist
        self.log_dir = os.path.join(output_dir or OUTPUT_DIR, "sessions")
        self.log_path = os.path.join(self.log_dir, f"session_{self.session_id}.json")
        self.events: List[Dict[str, Any]] = []
        self.command = ""
        self._lock = threading.Lock()
        if self.persist:
            os.makedirs(self.log_dir, exist_ok=True)
            self._cleanup_old_sessions()
            self._save()

    def _cleanup_old_sessions(self):
        """Keep only the newest MAX_SESSIONS session files"""
        try:
            files = glob.glob(os.path.join(self.log_dir, "session_*.json"))
            if len(files) >= self.MAX_SESSIONS:
                files.sort(key=os.path.getmtime)
                for f in files[:len(files) - self.MAX_SESSIONS + 1]:
                    try:
                        os.remove(f)
                    except OSError:
                        pass
        except OSError:
            pass

    def _add(self, phase: str, **fields):
        with self._lock:
            self.events.append({"phase": phase, "time": datetime.now().isoformat(), **fields})
            self._save()

    def set_command(self, command: str):
        self.command = command
        self._save()

    def log_info(self, message: str):
        self._add("info", message=message)

    def log_input(self, kind: str, path: str):
        """An input file that was read"""
        self._add("input", kind=kind, path=path)

    def log_result(self, command: str, result: Dict[str, Any]):
        self._add("result", command=command, result=result)

    def log_suite(self, suite: str, trials: int, failures: int, duration: float, replay: bool = False):
        self._add("suite", suite=suite, trials=trials, failures=failures,
                  duration=round(duration, 3), replay=replay)

    def log_counterexample(self, report: Dict[str, Any]):
        self._add("counterexample", report=report)

    def log_final(self, exit_code: int, total_time: float, error: Optional[str] = None):
        event = {"exit_code": exit_code, "total_time": round(total_time, 3)}
        if error:
            event["error"] = error[:400]
        self._add("final", **event)

    def _save(self):
        if not self.persist:
            return
        with open(self.log_path, "w", encoding="utf-8") as f:
            json.dump({
                "session": self.session_id,
                "command": self.command,
                "events": self.events,
            }, f, indent=2, ensure_ascii=False, default=str)

    def get_recent_events(self, n: int = 10) -> List[Dict[str, Any]]:
        return self.events[-n:]


# Global instance
_logger = None


def get_logger() -> RunLogger:
    global _logger
    if _logger is None:
        _logger = RunLogger()
    return _logger


def new_session(persist: Optional[bool] = None) -> RunLogger:
    global _logger
    _logger = RunLogger(persist=persist)
    return _logger
