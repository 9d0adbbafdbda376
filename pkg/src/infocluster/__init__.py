"""Unsupervised clustering of street architecture from segmented street views."""

__version__ = "0.1.0"
