from .base_config import BaseConfig, LinearSolverConfig
from .base_runner import BaseRunner
from .command_registry import get_command, list_commands
from .workers import WorkerPool

__all__ = [
    "BaseConfig",
    "BaseRunner",
    "LinearSolverConfig",
    "WorkerPool",
    "get_command",
    "list_commands",
]
