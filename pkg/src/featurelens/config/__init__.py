"""Configuration management for FeatureLens."""

from featurelens.config.settings import Config
from featurelens.config.loader import load_config, get_config_path

__all__ = ["Config", "load_config", "get_config_path"]
