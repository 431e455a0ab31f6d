"""Construction, classification and feasibility tools for divisible binary codes."""

__version__ = "0.1.0"
