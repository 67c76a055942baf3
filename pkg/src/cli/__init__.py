# CLI modules
"""
Command surface shared by the rootbound CLI and the HTTP API.
"""
