"""Floquet multipliers of linear periodic delay-differential equations."""

from ._core import (
    Problem,
    Session,
    pole_reference_single_delay_half,
    select_k,
)

__all__ = [
    "Problem",
    "Session",
    "pole_reference_single_delay_half",
    "select_k",
]
