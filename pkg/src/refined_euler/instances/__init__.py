"""Instance and trivialization files."""

from refined_euler.instances.loader import load_instance, load_trivialization, parse_instance, parse_trivialization

__all__ = ["load_instance", "load_trivialization", "parse_instance", "parse_trivialization"]
