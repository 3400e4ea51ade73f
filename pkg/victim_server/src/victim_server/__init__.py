"""Reference HTTP inference server speaking the victim wire protocol."""

from .app import ServerConfig, create_app

__all__ = ["ServerConfig", "create_app"]
