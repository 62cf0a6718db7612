"""
CLI interface for gpsav
"""
