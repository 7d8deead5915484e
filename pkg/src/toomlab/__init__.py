"""Verification lab for Toom's north-east-center rule, tile inflation and their composite."""

from .cuts import Cut, GuardExceeded, INF, evaluate_cut, thickness_connected, thickness_general
from .geometry import Span, Thirds, Triangle, bounding_triangle, discrete_span, span_d
from .lattice import PLANE, SiteSet, Space, connected_components, is_connected, torus
from .rules import Rule, apply_Q, apply_R, apply_Rplus, evolve
from .transfer import pullback_cut_Q, pullback_cut_R

__all__ = [
    "Cut", "GuardExceeded", "INF", "evaluate_cut", "thickness_connected", "thickness_general",
    "Span", "Thirds", "Triangle", "bounding_triangle", "discrete_span", "span_d",
    "PLANE", "SiteSet", "Space", "connected_components", "is_connected", "torus",
    "Rule", "apply_Q", "apply_R", "apply_Rplus", "evolve",
    "pullback_cut_Q", "pullback_cut_R",
]
