"""
Entry point for running gpsav as a module: python -m gpsav
"""

from gpsav.cli.main import cli

if __name__ == "__main__":
    cli()
