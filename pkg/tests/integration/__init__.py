"""Integration tests for the synth, extract, train and evaluate flow."""
