"""
Problemas del proyecto: directo, adjunto e inverso.
"""
