from .app import ServiceContext, create_app

__all__ = ["ServiceContext", "create_app"]
