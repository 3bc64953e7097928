"""HTTP service layer: FastAPI app factory and request/response schemas.

The ASGI application lives at ``lrkitaev.service.app:app``; use
``create_app()`` to build a fresh instance.
"""

from .app import create_app  # noqa: F401
