"""
hfgen - generalized Hellmann-Feynman checks for parameter-dependent domains
"""
__version__ = "1.0.0"
