"""Reference implementations for the golden master suite.

1. Classical - probability-vector formulas for diagonal states and stochastic maps
2. Commuting - closed forms for diagonal marginals
"""
