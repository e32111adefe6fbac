"""Exact planar embeddings of chainable continua given by PL bonding maps."""

from contembed.errors import ContEmbedError
from contembed.plmap import PLMap, parse_plmap
from contembed.chains import Chain1D, Pattern
from contembed.permute import STRICT, Permutation

__version__ = "0.1.0"

__all__ = ["ContEmbedError", "PLMap", "parse_plmap", "Chain1D", "Pattern", "STRICT", "Permutation",
           "__version__"]
