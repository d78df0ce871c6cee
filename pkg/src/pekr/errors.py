"""Exception types shared across the package."""


class PekrError(Exception):
    """Base class for all errors raised by pekr."""


class OverlapError(PekrError):
    """Two blocks share an element."""


class CoverError(PekrError):
    """Union of blocks is not exactly {1, ..., n}."""


class EmptyBlockError(PekrError):
    """A block is empty."""


class ElementError(PekrError):
    """An element is outside 1..n, or i = j where distinct elements are required."""


class DimensionError(PekrError):
    """Two partitions or families live on different ground sets."""


class RangeError(PekrError):
    """A numeric argument is outside its documented domain."""


class LimitError(PekrError):
    """Request exceeds a documented size limit."""


class EmptyFamilyError(PekrError):
    """Operation requires a nonempty family."""


class NotIntersectingError(PekrError):
    """Family fails the required t-intersecting precondition."""


class UnknownLemmaError(PekrError):
    """threshold_scan got a lemma identifier it does not know."""


class VerificationError(PekrError):
    """A verified-mode invariant check failed (indicates an implementation bug)."""


class ParseError(PekrError):
    """Malformed textual input; carries line/column diagnostics."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


class HeaderMismatch(ParseError):
    """A family member's ground-set size disagrees with the file header."""


class DuplicateMember(ParseError):
    """The same partition appears twice in a family file."""
