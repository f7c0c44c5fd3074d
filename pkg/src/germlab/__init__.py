"""germlab: exact computations in groups of homeomorphisms at desk scale."""

__version__ = "0.1.0"
