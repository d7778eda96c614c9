"""erislab: exact interpreter, error-bound checker, and case-study lab
for the eris probabilistic language."""

__version__ = "0.1.0"
