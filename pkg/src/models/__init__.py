"""
Result records shared by the engine, services and CLI
"""
