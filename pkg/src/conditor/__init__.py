"""Conditor: corpus-to-topic-map compiler and search engine."""

__version__ = "0.1.0"
