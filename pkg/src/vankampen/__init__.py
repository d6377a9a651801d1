"""Van Kampen obstructions, Milnor invariants and exact PL realizations for
the two-block complexes K(phi) obtained by gluing a disk along a word in <a, b>."""

__version__ = "0.1.0"
