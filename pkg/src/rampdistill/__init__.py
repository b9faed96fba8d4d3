"""rampdistill: ramp-merge driving simulator, expert teacher, and
teacher-distilled actor-critic students."""

from .actions import Action

__version__ = "0.1.0"

__all__ = ["Action", "__version__"]
