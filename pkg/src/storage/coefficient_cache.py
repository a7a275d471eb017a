"""
On-disk cache of newform coefficient tables.

Each entry is an .npz array file plus a JSON sidecar holding the table
metadata and the sha256 of the array file. Entries are keyed by (label, N);
a request for N is served from any entry with N' >= N by truncation. An entry
that fails its checksum, cannot be parsed or no longer validates is deleted
and rebuilt.
"""

import hashlib
import json
import os
from datetime import datetime
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..newforms.series import BUILTIN_FORMS
from ..newforms.table import NewformTable, eta_product_coefficients, load_qexpansion, validate_table
from ..utils.errors import ValidationError
from ..utils.logger import get_logger

DEFAULT_CACHE_DIR = "cache/coefficients"

Builder = Callable[[str, int], NewformTable]


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as file:
        for block in iter(lambda: file.read(1 << 20), b''):
            digest.update(block)
    return digest.hexdigest()


class CoefficientCache:
    """Checksummed store of NewformTable objects keyed by (label, N)."""

    def __init__(self, cache_dir: str = DEFAULT_CACHE_DIR):
        """
        Args:
            cache_dir: Directory holding the entries (created on first store)
        """
        self.cache_dir = cache_dir
        self.logger = get_logger()

    def _paths(self, label: str, N: int) -> Tuple[str, str]:
        stem = os.path.join(self.cache_dir, f"{label}_N{N}")
        return stem + ".npz", stem + ".json"

    def _entries(self, label: str) -> List[int]:
        """Cached N values for a label, ascending."""
        if not os.path.isdir(self.cache_dir):
            return []
        prefix = f"{label}_N"
        sizes = []
        for name in os.listdir(self.cache_dir):
            if name.startswith(prefix) and name.endswith(".json"):
                try:
                    sizes.append(int(name[len(prefix):-len(".json")]))
                except ValueError:
                    continue
        return sorted(sizes)

    def _discard(self, label: str, N: int, reason: str) -> None:
        key = f"{label}/N={N}"
        self.logger.log_cache_event("corrupt", key)
        self.logger.warning(f"Discarding cache entry: {reason}", key)
        for path in self._paths(label, N):
            if os.path.exists(path):
                os.remove(path)

    def store(self, table: NewformTable) -> str:
        """
        Write a table and its sidecar.

        Returns:
            Path of the array file

        Raises:
            OSError: If the cache directory is not writable (the path is in the message)
        """
        os.makedirs(self.cache_dir, exist_ok=True)
        data_path, meta_path = self._paths(table.label, table.N)
        if table.a.dtype == object:
            kind = "object"
            payload = np.array([str(int(v)) for v in table.a])
        else:
            kind = str(table.a.dtype)
            payload = table.a
        # np.savez appends .npz to names without it; the path already carries it
        with open(data_path, 'wb') as file:
            np.savez(file, a=payload)
        meta = {
            "label": table.label,
            "N": table.N,
            "R": table.R,
            "two_kappa": table.two_kappa,
            "eps_f": table.eps_f,
            "dtype": kind,
            "sha256": _sha256(data_path),
            "created": datetime.now().isoformat(),
        }
        with open(meta_path, 'w', encoding='utf-8') as file:
            json.dump(meta, file, indent=2)
        self.logger.log_cache_event("store", f"{table.label}/N={table.N}")
        return data_path

    def _read(self, label: str, N: int) -> Optional[NewformTable]:
        data_path, meta_path = self._paths(label, N)
        try:
            with open(meta_path, 'r', encoding='utf-8') as file:
                meta = json.load(file)
        except (OSError, json.JSONDecodeError) as e:
            self._discard(label, N, f"unreadable sidecar {meta_path}: {e}")
            return None
        if not os.path.exists(data_path):
            self._discard(label, N, f"missing array file {data_path}")
            return None
        if _sha256(data_path) != meta.get("sha256"):
            self._discard(label, N, f"checksum mismatch for {data_path}")
            return None
        try:
            with np.load(data_path, allow_pickle=False) as archive:
                raw = archive["a"]
            if meta["dtype"] == "object":
                a = np.array([int(s) for s in raw], dtype=object)
            else:
                a = raw.astype(meta["dtype"])
            if a.size != meta["N"] + 1:
                raise ValueError(f"array has {a.size} entries, sidecar says N={meta['N']}")
            table = NewformTable(meta["label"], int(meta["R"]), int(meta["two_kappa"]), a, int(meta["eps_f"]))
            validate_table(table)
        except (OSError, KeyError, ValueError, TypeError) as e:
            self._discard(label, N, f"{data_path}: {e}")
            return None
        return table

    def load(self, label: str, N: int) -> Optional[NewformTable]:
        """
        Smallest cached table for label with at least N coefficients, truncated to N.

        Returns:
            The table, or None on a miss (corrupt entries count as misses)
        """
        for size in self._entries(label):
            if size < N:
                continue
            table = self._read(label, size)
            if table is None:
                continue
            action = "hit" if size == N else "superset_hit"
            self.logger.log_cache_event(action, f"{label}/N={N} from N={size}")
            return table if size == N else table.truncated(N)
        self.logger.log_cache_event("miss", f"{label}/N={N}")
        return None

    def get_or_build(self, label: str, N: int, builder: Builder = eta_product_coefficients) -> NewformTable:
        """Cached table for (label, N), building and storing it on a miss."""
        table = self.load(label, N)
        if table is not None:
            return table
        self.logger.info(f"Generating coefficients up to N={N}", label)
        table = builder(label, N)
        self.store(table)
        return table

    def index(self) -> Dict[str, List[int]]:
        """Cached sizes per label."""
        if not os.path.isdir(self.cache_dir):
            return {}
        labels = {name.rsplit("_N", 1)[0] for name in os.listdir(self.cache_dir) if name.endswith(".json")}
        return {label: self._entries(label) for label in sorted(labels)}


def resolve_form(source: str, N: int, cache: Optional[CoefficientCache] = None) -> NewformTable:
    """
    Table for a built-in label (through the cache) or a q-expansion file path.

    Raises:
        ValidationError: If source is neither a built-in label nor an existing file
        InsufficientCoefficientsError: If a file holds fewer than N coefficients
    """
    if source in BUILTIN_FORMS:
        if cache is None:
            return eta_product_coefficients(source, N)
        return cache.get_or_build(source, N)
    if os.path.exists(source):
        table = load_qexpansion(source)
        table.require(N)
        return table if table.N == N else table.truncated(N)
    raise ValidationError(f"--form '{source}' is neither a built-in form {sorted(BUILTIN_FORMS)} nor a file")
