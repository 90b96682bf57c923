"""Decorated geometric crystals on GL_n and their tropicalizations."""
