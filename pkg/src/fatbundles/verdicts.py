"""Tri-state verdicts shared by the independent fatness criteria."""

from __future__ import annotations

from dataclasses import dataclass

FAT = "fat"
NOT_FAT = "not_fat"
NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one fatness criterion with its witness data.

    ``witness_root`` is a vanishing forbidden root (root criterion),
    ``null_vector`` a unit kernel vector of the curvature Gram in
    m-coordinates (numeric oracle), ``witness_vector`` an exact nonzero
    element of ker(ad) intersected with m (centralizer criterion).
    """

    status: str
    witness_root: tuple | None = None
    null_vector: tuple | None = None
    witness_vector: tuple | None = None
    min_singular_value: float | None = None
    max_singular_value: float | None = None
    note: str = ""

    @property
    def fat(self) -> bool:
        return self.status == FAT

    @property
    def applicable(self) -> bool:
        return self.status != NOT_APPLICABLE
