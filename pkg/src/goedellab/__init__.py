"""goedellab: an arithmetization workbench.

Prime-power coding of formulas, ascending enumeration of unary
formulas, a minimal Hilbert-style proof kernel, numerically certified
diagonalization, assumption-labeled replay of a classic antinomy-style
derivation against the independence argument it shadows, and decision
procedures for the provability logic GL (with K and K4 for contrast).
"""

__version__ = "1.0.0"

__all__ = [
    "audit",
    "cli",
    "codec",
    "diagonal",
    "errors",
    "formulas",
    "kernel",
    "meta",
    "modal",
]
