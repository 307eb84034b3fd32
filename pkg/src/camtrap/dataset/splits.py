"""Deterministic train/val/test splitting.

The shuffle uses Python's Mersenne-Twister ``random.Random`` seeded with
the given 64-bit integer, so the same ids and seed always reproduce the
same split. Ids are shuffled in their given order and then sliced
``[train | val | test]``; val and test take the floor of their ratio and
every remainder element lands in train.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from ..errors import EmptyDataset


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]
    seed: int

    def write(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name in ("train", "val", "test"):
            ids = getattr(self, name)
            (directory / f"{name}.txt").write_text(
                "".join(f"{i}\n" for i in ids), encoding="utf-8"
            )


def split_dataset(
    ids: list[str],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> DatasetSplit:
    if not ids:
        raise EmptyDataset("nothing to split")
    if len(set(ids)) != len(ids):
        raise ValueError("ids must be unique")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios {ratios} do not sum to 1")

    shuffled = list(ids)
    random.Random(seed).shuffle(shuffled)

    n = len(shuffled)
    n_val = int(n * ratios[1])
    n_test = int(n * ratios[2])
    n_train = n - n_val - n_test
    return DatasetSplit(
        train=tuple(shuffled[:n_train]),
        val=tuple(shuffled[n_train : n_train + n_val]),
        test=tuple(shuffled[n_train + n_val :]),
        seed=seed,
    )
