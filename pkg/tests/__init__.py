"""
Tests for gpsav
"""
