"""Graph-state entanglement routing: Bell and GHZ extraction by graph rewrites."""

__version__ = "0.1.0"
