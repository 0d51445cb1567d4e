"""
Configuration for the refined-euler tools.

Settings are read from the environment (prefix ``NPC_``) or a ``.env`` file.
"""

from functools import lru_cache
from typing import List

from pydantic_settings import BaseSettings

from refined_euler.errors import BitCapExceeded


class Settings(BaseSettings):
    max_bits: int = 4096
    default_primes: List[int] = [2, 3, 5, 7]
    seed: int = 0
    cases: int = 100
    log_level: str = "WARNING"

    class Config:
        env_file = ".env"
        env_prefix = "NPC_"
        extra = "ignore"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()


def check_bits(value: int) -> int:
    """
    Enforce the big-integer safety valve.

    Args:
        value: Integer produced by an exact computation

    Returns:
        The value unchanged

    Raises:
        BitCapExceeded: If the value needs more bits than ``NPC_MAX_BITS``
    """
    cap = get_settings().max_bits
    if value.bit_length() > cap:
        raise BitCapExceeded(
            "integer exceeds the configured bit cap",
            bits=value.bit_length(),
            cap=cap,
        )
    return value
