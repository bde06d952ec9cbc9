"""
interplab: desk-scale numerics for generalized real interpolation spaces.

K-method and trace-method norms, weighted rearrangement-invariant norms,
Hardy operators and weight classes, the functional calculus of sectorial
matrices and maximal regularity of Cauchy problems.
"""

__version__ = "1.0.0"
