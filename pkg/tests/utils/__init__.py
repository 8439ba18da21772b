"""
Tests for utility modules
""" 