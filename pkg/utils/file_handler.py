# utils/file_handler.py
# Reading distribution and joint files, writing reports and CSVs

import json
import os
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from config.settings import INF_TOKEN
from core.errors import InputError
from core.measures import (
    DiscreteDistribution,
    JointDistribution,
    distribution_from_json,
    joint_from_json,
)
from utils.logger import get_logger


class FileHandler:
    @staticmethod
    def read_json(file_path: str) -> Dict[str, Any]:
        if not os.path.exists(file_path):
            raise InputError(f"file not found: {file_path}")
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"{file_path} is not valid JSON: {e}")

    @staticmethod
    def load_distribution(file_path: str) -> DiscreteDistribution:
        get_logger().log_input("distribution", file_path)
        return distribution_from_json(FileHandler.read_json(file_path))

    @staticmethod
    def load_joint(file_path: str) -> JointDistribution:
        get_logger().log_input("joint", file_path)
        return joint_from_json(FileHandler.read_json(file_path))

    @staticmethod
    def write_json(data: Any, file_path: str, pretty: bool = True):
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(dumps_report(data, pretty))
            f.write("\n")

    @staticmethod
    def write_csv(df: pd.DataFrame, file_path: Optional[str] = None) -> str:
        """CSV text of df; also written to file_path when given"""
        text = df.to_csv(index=False, lineterminator="\n")
        if file_path:
            with open(file_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        return text

    @staticmethod
    def samples_frame(samples: np.ndarray) -> pd.DataFrame:
        return pd.DataFrame({"u": samples[:, 0], "v": samples[:, 1]})


def _jsonable(obj):
    """numpy scalars to Python, infinities to the "inf" token"""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if x == float("inf"):
            return INF_TOKEN
        if x == float("-inf"):
            return "-" + INF_TOKEN
        return x
    return obj


def dumps_report(data: Any, pretty: bool = False) -> str:
    """Single-line JSON by default; --pretty indents"""
    data = _jsonable(data)
    if pretty:
        return json.dumps(data, indent=2, allow_nan=False)
    return json.dumps(data, separators=(",", ":"), allow_nan=False)
