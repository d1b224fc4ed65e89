"""
File formats and figures
"""
