from .settings import EngineConfig

__all__ = ["EngineConfig"]
