"""Degree criteria for the generating graphs of small groups.

Decides whether the generating graph of a small finite group, or one of its
iterated closures, satisfies Posa's or Chvatal's criterion, from exact vertex
degrees computed in the group or from character-theoretic lower bounds.
"""

__version__ = "0.3.0"
__all__ = ["__version__"]
