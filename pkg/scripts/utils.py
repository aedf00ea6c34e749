#!/usr/bin/env python3
"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Utility functions for the legreal project
"""

import json
import os
import logging
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


RationalLike = Union[Fraction, int, str, Dict[str, str]]


# Configure logging
def setup_logging(name: str = "legreal", log_dir: Optional[str] = None, quiet: bool = False) -> logging.Logger:
    """
    Set up logging configuration

    Logs go to a dated file under the log directory and to the console.

    Args:
        name: logger name, also the log file prefix
        log_dir: directory for log files (default: LEGREAL_LOG_DIR or "logs")
        quiet: only warnings and errors on the console

    Returns:
        The configured logger
    """
    log_path = Path(log_dir or RealizerConfig().log_dir)
    log_path.mkdir(parents=True, exist_ok=True)

    log_file = log_path / f"{name}_{datetime.now().strftime('%Y%m%d')}.log"

    stream_handler = logging.StreamHandler()
    if quiet:
        stream_handler.setLevel(logging.WARNING)

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.FileHandler(log_file), stream_handler],
    )

    return logging.getLogger(name)


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational

    Accepts Fraction, int, strings such as "3", "-1/8" or "0.125", and the wire
    form {"num": "...", "den": "..."}. Floats are rejected.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, dict):
        den = int(value["den"])
        if den <= 0:
            raise ValueError(f"denominator must be positive, got {den}")
        return Fraction(int(value["num"]), den)
    raise ValueError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dump_json(data: Any) -> str:
    """Canonical JSON text: insertion-ordered keys, two-space indent, trailing newline"""
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def write_json(path: Union[str, Path], data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_json(data))
    return path


def read_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


class RealizerConfig:
    """
    Environment configuration

    Reads the LEGREAL_* variables (after load_dotenv) and exposes them with
    their defaults. CLI flags take precedence over these values.

    Attributes:
        epsilon: default vertical unit
        mu: default micro-offset unit
        max_attempts: genericity retry budget of the realizer
        log_dir: directory for log files
        output_dir: default directory for written documents
        seed: seed of the randomized test harness
        corpus_size: size of the randomized geometric test corpus
        debug: debug mode
    """

    def __init__(self):
        """Load settings from environment variables."""
        self.epsilon = parse_rational(os.getenv("LEGREAL_EPSILON", "1/8"))
        self.mu = parse_rational(os.getenv("LEGREAL_MU", "1/64"))
        self.max_attempts = int(os.getenv("LEGREAL_MAX_ATTEMPTS", "12"))
        self.log_dir = os.getenv("LEGREAL_LOG_DIR", "logs")
        self.output_dir = os.getenv("LEGREAL_OUTPUT_DIR", "output")
        self.seed = int(os.getenv("LEGREAL_SEED", "20240601"))
        self.corpus_size = int(os.getenv("LEGREAL_CORPUS_SIZE", "200"))
        self.debug = os.getenv("LEGREAL_DEBUG", "False").lower() == "true"

        if self.epsilon <= 0:
            raise ValueError("LEGREAL_EPSILON must be positive")
        if not 0 < self.mu < self.epsilon:
            raise ValueError("LEGREAL_MU must satisfy 0 < mu < epsilon")
        if self.max_attempts < 1:
            raise ValueError("LEGREAL_MAX_ATTEMPTS must be at least 1")
