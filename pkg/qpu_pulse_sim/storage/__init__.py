"""Result files and run provenance."""

from .result_store import FLOAT_FORMAT, MANIFEST_NAME, ResultStore, RunManifest, dump_json

__all__ = ["FLOAT_FORMAT", "MANIFEST_NAME", "ResultStore", "RunManifest", "dump_json"]
