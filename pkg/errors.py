"""
Exception hierarchy for the role induction toolkit.
Library code raises these; only cli.py turns them into exit codes.
"""

from typing import List, Optional


class RoleInductionError(Exception):
    """Base class for all expected failures"""
    exit_code = 1


class ConfigError(RoleInductionError):
    """Invalid settings, run config or command-line usage"""
    exit_code = 1


class DataError(RoleInductionError, ValueError):
    """Input data that cannot be used"""
    exit_code = 2


class ConllFormatError(DataError):
    """Malformed CoNLL-2009 input"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class ConllStructureError(ConllFormatError):
    """Well-formed rows describing an impossible tree (e.g. dangling head)"""


class AlignmentFormatError(DataError):
    """Malformed Pharaoh alignment line"""


class AlignmentDesyncError(DataError):
    """Alignment lines do not match the number of sentence pairs"""


class InstanceMismatchError(DataError):
    """Predicted and gold labels cover different argument instances"""

    def __init__(self, message: str, offending: Optional[List[str]] = None):
        self.offending = list(offending or [])[:10]
        if self.offending:
            message = f"{message}; first offending instances: {', '.join(self.offending)}"
        super().__init__(message)


class EnumerationLimitExceeded(DataError):
    """Frame too long for exact enumeration; use sampling instead"""


class ContractViolation(RoleInductionError):
    """Internal invariant broken (repeated primary role, negative count, missing CLV)"""
    exit_code = 3
