"""SMILES encoder-decoder language model toolkit."""

__version__ = "0.1.0"
