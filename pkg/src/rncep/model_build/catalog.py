"""Structured column/row keys for the model LPs."""

from __future__ import annotations

from collections.abc import Hashable, Sequence

import numpy as np

from ..lp.program import key_name


class CatalogError(ValueError):
    pass


class VariableCatalog:
    """Bijection between structured keys such as ``("F", k, a)`` and LP columns.

    Keys are tuples whose first element names the family.  Row keys of the
    same LP are kept alongside so rows can be located by structure too.
    """

    def __init__(self, col_keys: Sequence[Hashable], row_keys: Sequence[Hashable] = ()):
        self.col_keys = list(col_keys)
        self.row_keys = list(row_keys)
        self._cols = {k: j for j, k in enumerate(self.col_keys)}
        self._rows = {k: i for i, k in enumerate(self.row_keys)}
        if len(self._cols) != len(self.col_keys):
            raise CatalogError("duplicate column key")
        if len(self._rows) != len(self.row_keys):
            raise CatalogError("duplicate row key")
        fam: dict[str, list[int]] = {}
        for j, k in enumerate(self.col_keys):
            fam.setdefault(k[0], []).append(j)
        self._families = {f: np.array(js, dtype=np.int64) for f, js in fam.items()}
        rfam: dict[str, list[int]] = {}
        for i, k in enumerate(self.row_keys):
            rfam.setdefault(k[0], []).append(i)
        self._row_families = {f: np.array(js, dtype=np.int64) for f, js in rfam.items()}

    def __len__(self) -> int:
        return len(self.col_keys)

    def __contains__(self, key) -> bool:
        return key in self._cols

    def index(self, key) -> int:
        try:
            return self._cols[key]
        except KeyError:
            raise CatalogError(f"no column {key!r}") from None

    def row(self, key) -> int:
        try:
            return self._rows[key]
        except KeyError:
            raise CatalogError(f"no row {key!r}") from None

    def has_row(self, key) -> bool:
        return key in self._rows

    def family(self, name: str) -> np.ndarray:
        """Column indices of a family, in catalog order (empty if absent)."""
        return self._families.get(name, np.zeros(0, dtype=np.int64))

    def row_family(self, name: str) -> np.ndarray:
        return self._row_families.get(name, np.zeros(0, dtype=np.int64))

    def count(self, name: str) -> int:
        return int(self.family(name).size)

    def families(self) -> list[str]:
        return list(self._families)

    def names(self) -> list[str]:
        return [key_name(k) for k in self.col_keys]
