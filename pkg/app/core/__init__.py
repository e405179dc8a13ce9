"""Settings, constants and exceptions for the Lagrangian configuration toolkit"""
