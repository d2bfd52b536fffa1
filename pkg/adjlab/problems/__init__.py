"""
Shipped problem files.
"""
