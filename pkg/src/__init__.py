"""
WildTwist - Wild Twist Laboratory
Central values of modular L-functions twisted by wild Dirichlet characters.
"""

__version__ = "1.0.0"
