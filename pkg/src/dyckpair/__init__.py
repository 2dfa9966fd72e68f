"""Re-pairing brackets: widths of Dyck words, strategies, and related tools."""

from .errors import (CapExceeded, DyckPairError, InvalidRepairing, InvalidWord, InvariantViolation,
                     NotBinaryTree, ParseError)
from .repairing import exact_width, validate, width, width_of
from .strategies import bisect, frame_strategy, greedy
from .words import DyckWord, as_word, frame, x_word, y_word, z_word

__all__ = [
    "CapExceeded", "DyckPairError", "DyckWord", "InvalidRepairing", "InvalidWord",
    "InvariantViolation", "NotBinaryTree", "ParseError", "as_word", "bisect", "exact_width",
    "frame", "frame_strategy", "greedy", "validate", "width", "width_of", "x_word", "y_word",
    "z_word",
]
