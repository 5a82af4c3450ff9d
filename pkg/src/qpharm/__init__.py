"""Exact workbench for discrete and continuous polyharmonic functions of
zero-drift small-step quarter-plane walks."""

__version__ = "0.1.0"
