"""
Discrete Valuation Analyzer
Exact computation of values, residue fields and dimension for discrete
valuations given by an explicit embedding into Delta[[t]].
"""

__version__ = "1.0.0"
__author__ = "Ahmed Ziada"
