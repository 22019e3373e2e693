"""Stage artifacts: JSON files that carry the hashes of what they were built from.

Every file written by a CLI stage has the shape::

    {"kind": ..., "inputs": {name: hash}, "inputs_hash": ..., "content_hash": ..., "payload": ...}

Downstream stages compare the recorded input hashes with the files they are
handed and refuse to mix versions.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from jsonschema import ValidationError, validate
from pydantic import BaseModel

from src.common.errors import InconsistentArtifactError

log = logging.getLogger(__name__)

ARTIFACT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["kind", "inputs", "inputs_hash", "content_hash", "payload"],
    "properties": {
        "kind": {"type": "string"},
        "inputs": {"type": "object", "additionalProperties": {"type": "string"}},
        "inputs_hash": {"type": "string"},
        "content_hash": {"type": "string"},
    },
}


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


class Artifact(BaseModel):
    kind: str
    inputs: dict[str, str]
    inputs_hash: str
    content_hash: str
    payload: Any

    def require(self, **expected: str) -> None:
        """Fail unless every named input was built from the given content hash."""
        for name, digest in expected.items():
            recorded = self.inputs.get(name)
            if recorded != digest:
                log.error(
                    "%s artifact was built from %s %s, got %s", self.kind, name, recorded, digest
                )
                raise InconsistentArtifactError(
                    f"inconsistent artifact versions: {self.kind} does not match {name}"
                )


def write_artifact(
    path: Path, kind: str, payload: Any, inputs: dict[str, str] | None = None
) -> Artifact:
    inputs = dict(sorted((inputs or {}).items()))
    art = Artifact(
        kind=kind,
        inputs=inputs,
        inputs_hash=content_hash(inputs),
        content_hash=content_hash(payload),
        payload=payload,
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(art.dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    log.info("saved %s -> %s (%s)", kind, path, art.content_hash[:12])
    return art


def read_artifact(path: Path, kind: str) -> Artifact:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        validate(instance=data, schema=ARTIFACT_SCHEMA)
    except (json.JSONDecodeError, ValidationError) as exc:
        log.error("unreadable %s artifact %s: %s", kind, path, exc)
        raise InconsistentArtifactError(f"unreadable {kind} artifact {path}") from exc
    art = Artifact(**data)
    if art.kind != kind:
        raise InconsistentArtifactError(f"{path} holds a {art.kind} artifact, expected {kind}")
    if content_hash(art.payload) != art.content_hash:
        raise InconsistentArtifactError(
            f"inconsistent artifact versions: {path} payload does not match its hash"
        )
    return art
