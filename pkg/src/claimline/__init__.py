"""claimline: previously fact-checked claim retrieval and verification."""

__version__ = "0.1.0"
