"""Opportunistic jammer selection for MIMO wiretap channels."""

__version__ = "0.1.0"
