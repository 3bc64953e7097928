"""HTTP client used by the CLI.

The CLI always talks to the service API.  Without ``--server`` the app is
mounted in-process through an ASGI transport (same request/response cycle,
no socket); with a URL the same calls go to a running instance.
"""

from __future__ import annotations

import asyncio

import httpx

__all__ = ["ServiceError", "ServiceUsageError", "make_client", "post"]


class ServiceError(RuntimeError):
    """The service reported a computation failure (5xx)."""


class ServiceUsageError(ValueError):
    """The service rejected the request (4xx: bad flags or limits)."""


class _InProcessTransport(httpx.BaseTransport):
    """Drive an ASGI app synchronously, one event loop per request."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app, raise_app_exceptions=False)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        return asyncio.run(self._call(request))

    async def _call(self, request: httpx.Request) -> httpx.Response:
        response = await self._asgi.handle_async_request(request)
        content = await response.aread()
        await response.aclose()
        return httpx.Response(
            status_code=response.status_code,
            headers=response.headers,
            content=content,
        )


def make_client(server: str | None) -> httpx.Client:
    """Client for a remote service URL, or an in-process app when None."""
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from .service.app import create_app

    return httpx.Client(
        transport=_InProcessTransport(create_app()),
        base_url="http://lrkitaev.local",
    )


def _detail(response: httpx.Response) -> str:
    try:
        payload = response.json()
    except ValueError:
        return response.text[:500]
    if isinstance(payload, dict) and "detail" in payload:
        detail = payload["detail"]
        if isinstance(detail, list):  # pydantic validation errors
            return "; ".join(
                f"{'.'.join(str(x) for x in item.get('loc', []))}: {item.get('msg', '')}"
                for item in detail
            )
        return str(detail)
    return str(payload)[:500]


def post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code >= 500:
        raise ServiceError(_detail(response))
    if response.status_code >= 400:
        raise ServiceUsageError(_detail(response))
    return response.json()
