"""Stone(G,m) formulas, explicit short refutations, and checkers for them."""

__version__ = "0.1.0"
