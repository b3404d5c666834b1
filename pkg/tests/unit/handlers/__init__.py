"""Unit tests for handlers."""
