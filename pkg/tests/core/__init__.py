"""
Tests for core modules
""" 