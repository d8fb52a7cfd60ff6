"""Golden master suite for sotforge.

Closed-form reference values for star products, conditioning and retrodiction.
"""
