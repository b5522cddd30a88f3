from __future__ import annotations

import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "INFO") -> None:
    if isinstance(level, str):
        level = logging.getLevelName(level.strip().upper())
        if not isinstance(level, int):
            level = logging.INFO

    root = logging.getLogger("swarmplan")
    root.setLevel(level)
    # Re-running the CLI in one process (tests, notebooks) must not stack handlers.
    if not any(getattr(h, "_swarmplan", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._swarmplan = True  # type: ignore[attr-defined]
        root.addHandler(handler)
