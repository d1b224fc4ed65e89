"""
Configuration and logging helpers
"""
