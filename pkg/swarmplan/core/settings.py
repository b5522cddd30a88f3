from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any


@dataclass(frozen=True)
class DashboardSettings:
    active_results_dir: str | None = None
    last_points: int = 50
    last_uavs: int = 4


def load_settings(data_dir: Path) -> DashboardSettings:
    path = data_dir / "settings.json"
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(obj, dict):
            return DashboardSettings()
        return DashboardSettings(
            active_results_dir=str(obj.get("active_results_dir") or "") or None,
            last_points=int(obj.get("last_points") or 50),
            last_uavs=int(obj.get("last_uavs") or 4),
        )
    except Exception:
        return DashboardSettings()


def save_settings(data_dir: Path, settings: DashboardSettings) -> None:
    data_dir.mkdir(parents=True, exist_ok=True)
    path = data_dir / "settings.json"
    obj: dict[str, Any] = {
        "active_results_dir": settings.active_results_dir,
        "last_points": settings.last_points,
        "last_uavs": settings.last_uavs,
    }
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2), encoding="utf-8")
