"""Scenario files bundled with the package (JSON package data)."""
