"""Quantum-injected parametric amplifier simulator."""

from ._qiopa import *  # noqa: F401,F403
from ._qiopa import (
    DegenerateEventError,
    InvalidArgument,
    PolarizationQubit,
    QiopaError,
    run_cli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
