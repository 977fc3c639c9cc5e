"""Tests for the signal-processing systems."""
