"""Unit tests for runtime module."""
