"""
Artifact store for JSON outputs.
Handles atomic writes, loading, hashing and cleanup of partial files.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from .serialization import dumps

logger = logging.getLogger(__name__)


class ArtifactStore:
    """Manages the JSON artifacts of one workspace."""

    def __init__(self, base_dir: str = "./toric_artifacts"):
        self.base_dir = Path(base_dir)
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, name: str) -> Path:
        return self.base_dir / f"{name}.json"

    def save_artifact(self, name: str, data: Any) -> str:
        """
        Save an artifact atomically.

        Args:
            name: Artifact name (may contain '/' for sub-directories)
            data: Object made of dicts, lists, strings, ints and Fractions

        Returns:
            Path to the saved file
        """
        file_path = self.path_for(name)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        text = dumps(data)

        temp_path = file_path.with_suffix(".tmp")
        with open(temp_path, "w", encoding="utf-8") as f:
            f.write(text)
        temp_path.replace(file_path)

        logger.debug("wrote artifact %s", file_path)
        return str(file_path)

    def load_artifact(self, name: str) -> Optional[Dict[str, Any]]:
        """
        Load an artifact.

        Returns:
            Parsed JSON or None if not found
        """
        file_path = self.path_for(name)
        if not file_path.exists():
            return None
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)

    def artifact_info(self, name: str) -> Optional[Dict[str, Any]]:
        """
        Get file metadata.

        Returns:
            Dictionary with size and md5 hash
        """
        file_path = self.path_for(name)
        if not file_path.exists():
            return None
        with open(file_path, "rb") as f:
            file_hash = hashlib.md5(f.read()).hexdigest()
        return {"size": file_path.stat().st_size, "hash": file_hash}

    def list_artifacts(self) -> List[str]:
        return sorted(
            str(p.relative_to(self.base_dir).with_suffix(""))
            for p in self.base_dir.rglob("*.json")
        )

    def discard_partial(self) -> int:
        """
        Remove leftover temp files from an interrupted run.

        Returns:
            Number of files deleted
        """
        deleted = 0
        for file_path in self.base_dir.rglob("*.tmp"):
            file_path.unlink()
            deleted += 1
        if deleted:
            logger.info("removed %d partial artifact(s)", deleted)
        return deleted
