"""Error codes, message catalog and exception hierarchy."""

from enum import Enum


class ErrorCode(str, Enum):
    """Machine-readable error codes."""

    # Input (exit 1)
    PARSE_ERROR = "parse_error"
    UNKNOWN_VERTEX = "unknown_vertex"
    DUPLICATE_ID = "duplicate_id"
    NOT_HEREDITARY_SATURATED = "not_hereditary_saturated"
    NOT_NESTED = "not_nested"
    NOT_MONOTONE = "not_monotone"
    NOT_A_TAIL = "not_a_tail"
    NOT_CIRCLE = "not_circle"
    NOT_SUPPORTED_IN_W = "not_supported_in_w"
    MISSING_IMAGE = "missing_image"
    INDEX_MISMATCH = "index_mismatch"
    NOT_NATURAL = "not_natural"
    NOT_A_COCYCLE = "not_a_cocycle"
    DIMENSION_EQUATION_VIOLATED = "dimension_equation_violated"
    DIMS_MISMATCH = "dims_mismatch"
    HAS_CYCLE = "has_cycle"

    # Limits (exit 2)
    TOO_LARGE = "too_large"
    CAP_EXCEEDED = "cap_exceeded"

    # Invariant violations (exit 3)
    INCONSISTENT_CLASSIFIERS = "inconsistent_classifiers"
    INTERNAL_ERROR = "internal_error"


ERROR_MESSAGES: dict[ErrorCode, dict] = {
    ErrorCode.PARSE_ERROR: {
        "message": "Graph file could not be parsed",
        "hint": "Lines must be 'vertex <id>', 'edge <id> <src> <rng>', blank or '#' comments; ids match [A-Za-z0-9_]+.",
    },
    ErrorCode.UNKNOWN_VERTEX: {
        "message": "Edge or argument references an undeclared vertex",
        "hint": "Declare every vertex with a 'vertex <id>' line before using it.",
    },
    ErrorCode.DUPLICATE_ID: {
        "message": "Identifier declared twice",
        "hint": "Vertex and edge identifiers must be unique within their kind.",
    },
    ErrorCode.NOT_HEREDITARY_SATURATED: {
        "message": "Vertex set is not hereditary and saturated",
        "hint": "Use the closure of the set (see 'ideals') or pick a lattice element.",
    },
    ErrorCode.NOT_NESTED: {
        "message": "Vertex sets are not nested",
        "hint": "The first set must be contained in the second.",
    },
    ErrorCode.NOT_MONOTONE: {
        "message": "Map between lattices is not a monotone bijection",
    },
    ErrorCode.NOT_A_TAIL: {
        "message": "Vertex set is not a maximal tail",
        "hint": "Maximal tails are complements of proper prime lattice elements; see 'tails'.",
    },
    ErrorCode.NOT_CIRCLE: {
        "message": "Maximal tail is not of circle kind",
    },
    ErrorCode.NOT_SUPPORTED_IN_W: {
        "message": "Monoid element has support outside the given set",
    },
    ErrorCode.MISSING_IMAGE: {
        "message": "No image given for a vertex",
        "hint": "A monoid homomorphism needs an image for every vertex of the source graph.",
    },
    ErrorCode.INDEX_MISMATCH: {
        "message": "Diagram is not indexed by the graph's lattice",
        "hint": "Pull the diagram back along an order isomorphism first.",
    },
    ErrorCode.NOT_NATURAL: {
        "message": "Family of homomorphisms is not a natural transformation",
    },
    ErrorCode.NOT_A_COCYCLE: {
        "message": "Family does not vanish on the K1 diagram",
    },
    ErrorCode.DIMENSION_EQUATION_VIOLATED: {
        "message": "Dimension vector does not satisfy the Cuntz-Krieger dimension equation",
        "hint": "Each regular vertex needs dims(v) equal to the sum of dims over the sources of edges ending at v.",
    },
    ErrorCode.DIMS_MISMATCH: {
        "message": "Correspondence families have different dimension tables",
    },
    ErrorCode.HAS_CYCLE: {
        "message": "Graph has a cycle",
        "hint": "AF alignment requires an acyclic graph.",
    },
    ErrorCode.TOO_LARGE: {
        "message": "Graph exceeds the enumeration bound",
        "hint": "Raise GRAPHINV_MAX_LATTICE_VERTICES or pass --max-vertices.",
    },
    ErrorCode.CAP_EXCEEDED: {
        "message": "Search cap exceeded",
        "hint": "Raise the corresponding GRAPHINV_*_CAP setting; results are never silently truncated.",
    },
    ErrorCode.INCONSISTENT_CLASSIFIERS: {
        "message": "Combinatorial and K-theoretic tail classification disagree",
        "hint": "This indicates an implementation bug; please report the input graph.",
    },
    ErrorCode.INTERNAL_ERROR: {
        "message": "Internal invariant violated",
        "hint": "This indicates an implementation bug; please report the input graph.",
    },
}

EXIT_STATUS: dict[ErrorCode, int] = {
    ErrorCode.TOO_LARGE: 2,
    ErrorCode.CAP_EXCEEDED: 2,
    ErrorCode.INCONSISTENT_CLASSIFIERS: 3,
    ErrorCode.INTERNAL_ERROR: 3,
}


def make_error(code: ErrorCode, **overrides) -> dict:
    """
    Build an error report dict for the given error code.

    Args:
        code: The ErrorCode enum value
        **overrides: Optional field overrides (message, hint) or detail fields

    Returns:
        Dict with {"error": {...}} structure ready for JSON output
    """
    base = ERROR_MESSAGES.get(code, {"message": "An error occurred", "hint": None})

    error = {
        "code": code.value,
        "message": base.get("message", "An error occurred"),
    }
    if base.get("hint"):
        error["hint"] = base["hint"]

    for key in ("message", "hint"):
        if overrides.get(key) is not None:
            error[key] = overrides.pop(key)
    detail = {k: v for k, v in overrides.items() if v is not None}
    if detail:
        error["detail"] = detail
    return {"error": error}


class GraphInvError(Exception):
    """Base exception carrying an ErrorCode and structured detail."""

    code: ErrorCode = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str | None = None, **detail):
        self.detail = detail
        self.message = message or ERROR_MESSAGES[self.code]["message"]
        super().__init__(self.message)

    @property
    def exit_status(self) -> int:
        return EXIT_STATUS.get(self.code, 1)

    def to_dict(self) -> dict:
        return make_error(self.code, message=self.message, **self.detail)


class ParseError(GraphInvError):
    code = ErrorCode.PARSE_ERROR


class UnknownVertex(GraphInvError):
    code = ErrorCode.UNKNOWN_VERTEX


class DuplicateId(GraphInvError):
    code = ErrorCode.DUPLICATE_ID


class NotHereditarySaturated(GraphInvError):
    code = ErrorCode.NOT_HEREDITARY_SATURATED


class NotNested(GraphInvError):
    code = ErrorCode.NOT_NESTED


class NotMonotone(GraphInvError):
    code = ErrorCode.NOT_MONOTONE


class NotATail(GraphInvError):
    code = ErrorCode.NOT_A_TAIL


class NotCircle(GraphInvError):
    code = ErrorCode.NOT_CIRCLE


class NotSupportedInW(GraphInvError):
    code = ErrorCode.NOT_SUPPORTED_IN_W


class MissingImage(GraphInvError):
    code = ErrorCode.MISSING_IMAGE


class IndexMismatch(GraphInvError):
    code = ErrorCode.INDEX_MISMATCH


class NotNatural(GraphInvError):
    code = ErrorCode.NOT_NATURAL


class NotACocycle(GraphInvError):
    code = ErrorCode.NOT_A_COCYCLE


class DimensionEquationViolated(GraphInvError):
    code = ErrorCode.DIMENSION_EQUATION_VIOLATED


class DimsMismatch(GraphInvError):
    code = ErrorCode.DIMS_MISMATCH


class HasCycle(GraphInvError):
    code = ErrorCode.HAS_CYCLE


class TooLarge(GraphInvError):
    code = ErrorCode.TOO_LARGE


class CapExceeded(GraphInvError):
    code = ErrorCode.CAP_EXCEEDED


class InconsistentClassifiers(GraphInvError):
    code = ErrorCode.INCONSISTENT_CLASSIFIERS


class InternalAssertion(GraphInvError):
    code = ErrorCode.INTERNAL_ERROR


def check(condition: bool, message: str, **detail) -> None:
    """Raise InternalAssertion unless condition holds."""
    if not condition:
        raise InternalAssertion(message, **detail)
