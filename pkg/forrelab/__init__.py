"""forrelab: Forrelation-encoded oracle worlds and their cryptography."""

__version__ = "0.1.0"
