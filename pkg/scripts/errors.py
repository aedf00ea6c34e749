"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Error hierarchy shared by every stage of the pipeline.

Each error carries the process exit code the CLI should use and a list of
machine-readable details (usually the violation entries of a validation
report).
"""

from typing import Any, Dict, List, Optional


class LegrealError(ValueError):
    """Base class for all expected failures of the toolkit"""

    exit_code = 1

    def __init__(self, message: str, details: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message)
        self.message = message
        self.details = list(details or [])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


# Documents and geometry
class SchemaError(LegrealError):
    exit_code = 2


class VerticalEdge(LegrealError):
    exit_code = 2


class GenericityError(LegrealError):
    exit_code = 2


class ValencyOneVertex(LegrealError):
    exit_code = 2


class DegenerateExtent(LegrealError):
    exit_code = 2


class OddCuspCount(LegrealError):
    exit_code = 2


class GapNotFound(LegrealError):
    exit_code = 2


# Curves and topology
class NotSimple(LegrealError):
    exit_code = 3


class NotNormalized(LegrealError):
    exit_code = 3


class Disconnected(LegrealError):
    exit_code = 3


class BadRanks(LegrealError):
    exit_code = 3


class NoOddHandle(LegrealError):
    exit_code = 3


class HomologicallyTrivialWordCurve(LegrealError):
    exit_code = 3


# Internal consistency guards
class UnbalancedGains(LegrealError):
    exit_code = 4


class EndpointMismatch(LegrealError):
    exit_code = 4


class RealizationFailed(LegrealError):
    exit_code = 4
