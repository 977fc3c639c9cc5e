"""Tests for data persistence."""
