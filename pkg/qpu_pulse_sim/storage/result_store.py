"""Atomic result files and the run manifest.

Data files are staged in a hidden directory inside the output folder and
moved into place with ``os.replace`` only when the run succeeds. The
manifest is written last.
"""

import json
import logging
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from types import TracebackType
from typing import Any, Dict, List, Optional, Type, Union

import numpy as np
import pandas as pd

from ..core.errors import NumericError, make_context

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
MANIFEST_NAME = "manifest.json"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (Path, datetime)):
        return str(value)
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dump_json(data: Any) -> str:
    """Sorted-key, indented JSON text with numpy support."""
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) + "\n"


class ResultStore:
    """Context manager collecting the data files of one run.

    Example:
        with ResultStore(output_dir) as store:
            store.write_frame("spectrum.csv", frame)
            store.write_json("report.json", report)
    """

    def __init__(self, output_dir: Union[str, Path]) -> None:
        self.output_dir = Path(output_dir)
        self.files: List[str] = []
        self._staging: Optional[Path] = None

    def __enter__(self) -> "ResultStore":
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self._staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=self.output_dir))
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[TracebackType],
    ) -> None:
        if exc_type is None:
            self.commit()
        else:
            logger.warning(f"Discarding {len(self.files)} staged file(s) after {exc_type.__name__}")
            self.discard()

    def _path(self, name: str) -> Path:
        if self._staging is None:
            raise NumericError(
                "result store is not open",
                context=make_context(__name__, "ResultStore.write", name=name),
            )
        if name in self.files:
            raise NumericError(
                f"{name} was already written in this run",
                context=make_context(__name__, "ResultStore.write", name=name),
            )
        self.files.append(name)
        return self._staging / name

    def write_frame(self, name: str, frame: pd.DataFrame, index: bool = False) -> Path:
        """CSV through pandas with a fixed float format."""
        path = self._path(name)
        frame.to_csv(path, index=index, float_format=FLOAT_FORMAT)
        return self.output_dir / name

    def write_json(self, name: str, data: Any) -> Path:
        path = self._path(name)
        path.write_text(dump_json(data), encoding="utf-8")
        return self.output_dir / name

    def commit(self) -> None:
        if self._staging is None:
            return
        for name in self.files:
            os.replace(self._staging / name, self.output_dir / name)
        shutil.rmtree(self._staging, ignore_errors=True)
        self._staging = None
        logger.info(f"Wrote {len(self.files)} file(s) to {self.output_dir}")

    def discard(self) -> None:
        if self._staging is not None:
            shutil.rmtree(self._staging, ignore_errors=True)
        self._staging = None
        self.files = []


@dataclass
class RunManifest:
    """Provenance record of one run, emitted once after its data files."""

    experiment: str
    config_hash: str
    version: str
    seed: int
    started_at: str
    wall_time_s: float
    files: List[str] = field(default_factory=list)
    report: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def write(self, output_dir: Union[str, Path]) -> Path:
        """Atomically write ``manifest.json`` into ``output_dir``."""
        target = Path(output_dir) / MANIFEST_NAME
        fd, tmp = tempfile.mkstemp(prefix=".manifest-", dir=target.parent)
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(dump_json(self.to_dict()))
        os.replace(tmp, target)
        return target

    @classmethod
    def read(cls, path: Union[str, Path]) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as f:
            return cls(**json.load(f))
