"""Test suite for FeatureLens."""
