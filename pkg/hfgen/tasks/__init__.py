"""
Tasks Package
"""
