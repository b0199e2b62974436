from .app import create_app
from .config import ServiceConfig, resolve_config
from .store import Store

__all__ = ["create_app", "ServiceConfig", "resolve_config", "Store"]
