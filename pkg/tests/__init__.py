"""Test suite for Entropy-Playground."""
