"""Tests for the orchestration services."""
