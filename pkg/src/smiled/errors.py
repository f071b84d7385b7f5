"""Exception types shared across the package.

Parser errors carry the offset of the offending character so callers can
point at the exact spot in the input string.
"""


class SmiledError(Exception):
    """Base class for all package errors."""


class SmilesError(SmiledError):
    """Base class for SMILES parsing errors; carries the input offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnbalancedParenthesis(SmilesError):
    pass


class UnclosedRingBond(SmilesError):
    pass


class UnknownElement(SmilesError):
    pass


class MalformedBracketAtom(SmilesError):
    pass


class SmilesSyntaxError(SmilesError):
    """Structural problems outside the named categories (stray bond
    symbols, ring-bond order conflicts, self closures, duplicate bonds)."""


class ValenceViolation(SmiledError):
    def __init__(self, atom_index: int, message: str):
        super().__init__(f"atom {atom_index}: {message}")
        self.atom_index = atom_index


class WidthMismatch(SmiledError):
    pass


class UnmatchedBracket(SmilesError):
    pass


class EmptyCorpus(SmiledError):
    pass


class TooLong(SmiledError):
    pass


class UnknownId(SmiledError):
    pass


class ShapeMismatch(SmiledError):
    pass


class OddHeadDim(SmiledError):
    pass


class CorruptCheckpoint(SmiledError):
    pass


class ConfigMismatch(SmiledError):
    pass


class KTooLarge(SmiledError):
    pass


class LabelShapeMismatch(SmiledError):
    pass


class SingleClass(SmiledError):
    pass


class DegenerateSystem(SmiledError):
    pass


class EmptyInput(SmiledError):
    pass
