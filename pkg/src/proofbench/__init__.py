"""proofbench: a server and toolkit for browser-based proof exercises."""

__version__ = "0.1.0"
