"""Unit tests for Entropy-Playground."""
