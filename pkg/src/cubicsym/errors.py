"""Exception hierarchy.

Every error carries a short machine-readable ``kind`` so the command line
front end can emit a structured error object.
"""

from __future__ import annotations


class CubicSymError(Exception):
    kind = "error"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        out = {"type": self.kind, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value if isinstance(value, (int, bool, type(None))) else str(value)
        return out


# field
class NotSquarefree(CubicSymError):
    kind = "not_squarefree"


class RationalRootFound(CubicSymError):
    kind = "rational_root"


class FieldMismatch(CubicSymError, TypeError):
    kind = "field_mismatch"


class DivisionByZero(CubicSymError, ZeroDivisionError):
    kind = "division_by_zero"


class NotDivisible(CubicSymError, ArithmeticError):
    kind = "not_divisible"


class ParseError(CubicSymError, ValueError):
    kind = "parse_error"


# geometry
class CoincidentPoints(CubicSymError):
    kind = "coincident_points"


class SkewLines(CubicSymError):
    kind = "skew_lines"


class EqualLines(CubicSymError):
    kind = "equal_lines"


class NotInGeneralPosition(CubicSymError):
    kind = "not_in_general_position"


class NonUniqueSolution(CubicSymError):
    kind = "non_unique_solution"


class PostCheckFailed(CubicSymError):
    kind = "post_check_failed"


# lines27
class NotIncident(CubicSymError):
    kind = "not_incident"


class InvalidExtendedLSet(CubicSymError):
    kind = "invalid_extended_lset"


# surface
class NotOnSurface(CubicSymError):
    kind = "not_on_surface"


class DivisionFailed(CubicSymError):
    kind = "division_failed"


class DegenerateParameters(CubicSymError):
    kind = "degenerate_parameters"


class NotCoplanar(CubicSymError):
    kind = "not_coplanar"


class SingularSurface(CubicSymError):
    """Raised when the 27-line construction produces an inconsistent
    configuration (duplicate lines or wrong incidences)."""

    kind = "singular_surface"


# families
class UnknownFamily(CubicSymError, KeyError):
    kind = "unknown_family"

    def __str__(self):
        return self.args[0] if self.args else ""


class MissingParameter(CubicSymError):
    kind = "missing_parameter"


class UnknownParameter(CubicSymError):
    kind = "unknown_parameter"


class DenominatorVanishes(CubicSymError):
    kind = "denominator_vanishes"


class SingularMember(CubicSymError):
    kind = "singular_member"


# stabilizer
class ClosureViolation(CubicSymError):
    kind = "closure_violation"


class UnknownLabel(CubicSymError):
    kind = "unknown_label"
