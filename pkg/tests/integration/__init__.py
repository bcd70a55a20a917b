"""Integration tests for end-to-end filtering, control and simulation properties."""
