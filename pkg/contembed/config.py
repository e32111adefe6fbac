"""
Configuration for contembed
Values come from the environment (optionally a .env file in the working directory)
"""

import os
import json
import logging
from fractions import Fraction
from typing import List
from dotenv import load_dotenv

# Load environment variables
load_dotenv(override=True)

logger = logging.getLogger(__name__)


class EmbedConfig:
    """Configuration handler for map algebra, searches and rendering"""

    def __init__(self):
        """Load configuration from environment variables"""
        # Randomized property tests
        seed = os.getenv("CONTEMBED_SEED", "")
        self.seed = int(seed) if seed.strip() else None

        # Tube construction
        self.eps0 = self._parse_fraction("CONTEMBED_EPS0", "1/8")
        self.chain = int(os.getenv("CONTEMBED_CHAIN", "4"))
        self.chain_sizes = self._parse_list_config("CONTEMBED_CHAIN_SIZES", [4, 8, 16, 32, 64, 128])

        # Search guards
        self.enum_limit = int(os.getenv("CONTEMBED_ENUM_LIMIT", "9"))

        # Output
        self.precision = int(os.getenv("CONTEMBED_PRECISION", "12"))
        self.results_dir = os.getenv("CONTEMBED_RESULTS_DIR", "results")
        self.log_level = os.getenv("CONTEMBED_LOG_LEVEL", "WARNING").upper()

        # Validate configuration
        self._validate_config()

    def _parse_fraction(self, key: str, default: str) -> Fraction:
        text = os.getenv(key, default).strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{key} must be a rational such as 1/8, got {text!r}")

    def _parse_list_config(self, key: str, default: List[int]) -> List[int]:
        """Parse list configuration from environment variable"""
        config_str = os.getenv(key, "")
        if not config_str:
            return default
        try:
            return json.loads(config_str)
        except json.JSONDecodeError:
            logger.warning("Failed to parse %s=%r, using default", key, config_str)
            return default

    def _validate_config(self):
        """Validate configuration ranges"""
        if not 0 < self.eps0 < Fraction(1, 2):
            raise ValueError("CONTEMBED_EPS0 must lie strictly between 0 and 1/2")
        if self.chain < 1:
            raise ValueError("CONTEMBED_CHAIN must be a positive integer")
        if not self.chain_sizes or any(not isinstance(n, int) or n < 1 for n in self.chain_sizes):
            raise ValueError("CONTEMBED_CHAIN_SIZES must be a JSON list of positive integers")
        if self.enum_limit < 1:
            raise ValueError("CONTEMBED_ENUM_LIMIT must be a positive integer")
        if not 1 <= self.precision <= 17:
            raise ValueError("CONTEMBED_PRECISION must be between 1 and 17")

    def sizes_for_depth(self, depth: int) -> List[int]:
        """Chain sizes for levels 0..depth, doubling the last configured size when short"""
        sizes = list(self.chain_sizes[: depth + 1])
        while len(sizes) < depth + 1:
            sizes.append(sizes[-1] * 2)
        return sizes


def load_config() -> EmbedConfig:
    return EmbedConfig()
