"""Command-line interface for FeatureLens."""

from featurelens.cli.main import app, main

__all__ = ["app", "main"]
