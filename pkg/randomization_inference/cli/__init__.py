"""
Command-line interface
"""

from .main import build_parser, exit_code_for, main
