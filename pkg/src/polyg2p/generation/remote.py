"""HTTP client for a remote generation endpoint.

Wire protocol: POST ``/generate`` with ``{"prompt": str,
"max_new_tokens": int, "greedy": bool}``; a successful reply is
``{"text": str}``. Anything else (timeout, non-2xx, malformed body)
surfaces as BackendUnavailable.
"""

from __future__ import annotations

import json
import os

import httpx

from ..errors import BackendUnavailable
from .base import GenerationRequest

ENV_BACKEND_URL = "POLYG2P_BACKEND_URL"


class RemoteBackend:
    def __init__(
        self,
        base_url: str | None = None,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        resolved = base_url or os.environ.get(ENV_BACKEND_URL)
        if not resolved:
            raise ValueError(f"no backend URL given and {ENV_BACKEND_URL} is unset")
        self.base_url = resolved.rstrip("/")
        self.backend_id = f"remote:{self.base_url}"
        self._client = httpx.Client(base_url=self.base_url, timeout=timeout, transport=transport)

    def generate(self, request: GenerationRequest) -> str:
        body = {
            "prompt": request.prompt_text,
            "max_new_tokens": request.max_new_tokens,
            "greedy": request.greedy,
        }
        try:
            response = self._client.post("/generate", json=body)
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"{self.base_url}: {exc}") from exc
        if response.status_code < 200 or response.status_code >= 300:
            raise BackendUnavailable(f"{self.base_url}: HTTP {response.status_code}")
        try:
            payload = response.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise BackendUnavailable(f"{self.base_url}: reply is not JSON") from exc
        text = payload.get("text") if isinstance(payload, dict) else None
        if not isinstance(text, str):
            raise BackendUnavailable(f"{self.base_url}: reply missing 'text'")
        return text

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "RemoteBackend":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
