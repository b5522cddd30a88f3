from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
import os

from dotenv import load_dotenv


@dataclass(frozen=True)
class AppConfig:
    repo_root: Path
    data_dir: Path
    results_dir: Path

    log_level: str
    jobs: int


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def load_config() -> AppConfig:
    load_dotenv()
    repo_root = Path(__file__).resolve().parents[1]

    # blank values in .env count as unset
    data_dir = Path(os.getenv("SWARMPLAN_DATA_DIR") or str(repo_root / ".local")).expanduser().resolve()
    results_dir = Path(os.getenv("SWARMPLAN_RESULTS_DIR") or str(repo_root / "results")).expanduser().resolve()

    return AppConfig(
        repo_root=repo_root,
        data_dir=data_dir,
        results_dir=results_dir,
        log_level=os.getenv("SWARMPLAN_LOG_LEVEL") or "INFO",
        jobs=_int_env("SWARMPLAN_JOBS", 1),
    )
