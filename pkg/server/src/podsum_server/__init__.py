"""HTTP model server for the podsum pipeline."""

from podsum_server.app import ServerConfig, create_app

__all__ = ["ServerConfig", "create_app"]
