"""Node classification from approximate personalized PageRank label distributions."""

__version__ = "0.1.0"
