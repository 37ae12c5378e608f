#!/usr/bin/env python3
"""
Command-line entry point for the MCC planner
"""
from mcc_planner import create_cli

cli = create_cli()

if __name__ == '__main__':
    cli()
