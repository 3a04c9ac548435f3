"""binomdec: primary decomposition of binomial ideals over finite fields"""

__version__ = "0.1.0"
