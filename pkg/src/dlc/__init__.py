"""Differentiable-logic toolkit: typed formulas, seven interpretations,
law checking, analytic verification, and hypersequent proof checking."""

__version__ = "0.1.0"
