"""
painleve-lab - Lie symmetries, reductions and Painleve analysis of nonlinear evolution equations.
"""

__version__ = "0.1.0"
