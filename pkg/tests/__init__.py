"""
Test package for the randomization inference engine
"""
