"""
Subcomandos de la CLI. Cada módulo define un BaseRunner registrado en
core/command_registry.py.
"""

from commands.run_config import RunConfig

__all__ = ["RunConfig"]
