"""
Test suite for the ISAC APM emulator.
"""
