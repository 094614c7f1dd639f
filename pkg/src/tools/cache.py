from __future__ import annotations

import os
import threading
from abc import ABC, abstractmethod
from collections import OrderedDict
from typing import Hashable

from models.schemas import DecodableSets, FieldMatrix


def store_key(A: FieldMatrix, s: int) -> tuple[Hashable, ...]:
    return (A.rows, A.cols, A.field.modulus, A.entries, s)


class DecodableStore(ABC):
    @abstractmethod
    def get(self, key: tuple[Hashable, ...]) -> DecodableSets | None:
        ...

    @abstractmethod
    def put(self, key: tuple[Hashable, ...], value: DecodableSets) -> None:
        ...


class InMemoryDecodableStore(DecodableStore):
    """
    In-process store of enumerated decodable sets with a max entry cap.
    The oldest entries are dropped first.
    """

    def __init__(self, max_entries: int | None = None):
        if max_entries is None:
            max_entries = int(os.getenv("INDEX_CODING_CACHE_SIZE", "256"))
        self.max_entries = max_entries
        self._entries: OrderedDict[tuple[Hashable, ...], DecodableSets] = OrderedDict()
        self.hits = 0
        self.misses = 0
        # shared by the API worker threads
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: tuple[Hashable, ...]) -> DecodableSets | None:
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self.misses += 1
                return None
            self.hits += 1
            self._entries.move_to_end(key)
            return value

    def put(self, key: tuple[Hashable, ...], value: DecodableSets) -> None:
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)
