"""Species catalog: the canonical class list shared by every subsystem.

Class ids are contiguous integers starting at 0 and their order is fixed,
so YOLO label files, detector class indices and report rows all agree.
A catalog can be loaded from a tab-separated config file for deployments
that monitor a different species set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidCatalog, UnknownClass


@dataclass(frozen=True)
class SpeciesEntry:
    class_id: int
    scientific_name: str
    common_name: str


@dataclass(frozen=True)
class SpeciesCatalog:
    """Immutable, validated list of detectable classes.

    Either the scientific or the common name resolves a class, matched
    case-insensitively. Every name string must map to exactly one id.
    """

    entries: tuple[SpeciesEntry, ...]
    _by_name: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise InvalidCatalog("catalog has no entries")
        ids = [e.class_id for e in self.entries]
        if ids != list(range(len(self.entries))):
            raise InvalidCatalog("class ids must be contiguous 0..N-1 in order")
        by_name: dict[str, int] = {}
        for entry in self.entries:
            for name in (entry.scientific_name, entry.common_name):
                key = name.strip().lower()
                if not key:
                    raise InvalidCatalog(f"class {entry.class_id} has an empty name")
                if by_name.get(key, entry.class_id) != entry.class_id:
                    raise InvalidCatalog(f"name {name!r} is ambiguous")
                by_name[key] = entry.class_id
        object.__setattr__(self, "_by_name", by_name)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, class_id: int) -> bool:
        return 0 <= class_id < len(self.entries)

    def lookup(self, name: str) -> int:
        """Resolve a scientific or common name to its class id."""
        try:
            return self._by_name[name.strip().lower()]
        except KeyError:
            raise UnknownClass(f"no class named {name!r}") from None

    def entry(self, class_id: int) -> SpeciesEntry:
        if class_id not in self:
            raise UnknownClass(f"no class with id {class_id}")
        return self.entries[class_id]

    def scientific_name(self, class_id: int) -> str:
        return self.entry(class_id).scientific_name

    def common_name(self, class_id: int) -> str:
        return self.entry(class_id).common_name

    def dump(self, path: str | Path) -> None:
        """Write the catalog as ``class_id<TAB>scientific<TAB>common`` lines."""
        lines = [
            f"{e.class_id}\t{e.scientific_name}\t{e.common_name}\n" for e in self.entries
        ]
        Path(path).write_text("".join(lines), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SpeciesCatalog":
        """Read a catalog config file (see :meth:`dump` for the format)."""
        entries = []
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise InvalidCatalog(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                class_id = int(parts[0])
            except ValueError:
                raise InvalidCatalog(f"{path}:{lineno}: bad class id {parts[0]!r}") from None
            entries.append(SpeciesEntry(class_id, parts[1].strip(), parts[2].strip()))
        entries.sort(key=lambda e: e.class_id)
        return cls(tuple(entries))


# The fleet this platform was built around: 26 classes, id order fixed.
# Capercaillie cock/hen and the curlew chick get qualified common names so
# that every name string stays an unambiguous lookup key.
_DEFAULT_ENTRIES = (
    ("Person", "Person"),
    ("Vulpes vulpes", "Red fox"),
    ("Dama dama", "European fallow deer"),
    ("Capreolus capreolus", "Roe deer"),
    ("Erinaceus europaeus", "European hedgehog"),
    ("Capercaillie cock", "Wood grouse cock"),
    ("Capercaillie hen", "Wood grouse hen"),
    ("Bos taurus", "Cattle"),
    ("Canis familiaris", "Domestic dog"),
    ("Cervus elaphus", "Red deer"),
    ("Oryctolagus cuniculus", "European rabbit"),
    ("Meles meles", "European badger"),
    ("Buteo buteo", "Common buzzard"),
    ("Accipiter gentilis", "Northern goshawk"),
    ("Felis catus", "Domestic cat"),
    ("Sciurus carolinensis", "Eastern grey squirrel"),
    ("Sciurus vulgaris", "Red squirrel"),
    ("Martes martes", "European pine marten"),
    ("Phasianus colchicus", "Common pheasant"),
    ("Passer domesticus", "House sparrow"),
    ("Ovis aries", "Domestic sheep"),
    ("Columba palumbus", "Common wood pigeon"),
    ("Numenius arquata", "Common curlew"),
    ("Numenius arquata chick", "Common curlew chick"),
    ("Capra hircus", "Domestic goat"),
    ("Calibration pole", "Calibration pole"),
)


def default_catalog() -> SpeciesCatalog:
    """The built-in 26-class catalog."""
    return SpeciesCatalog(
        tuple(
            SpeciesEntry(i, sci, common) for i, (sci, common) in enumerate(_DEFAULT_ENTRIES)
        )
    )


def lookup_class(catalog: SpeciesCatalog, name: str) -> int:
    """Resolve ``name`` (scientific or common, any case) to a class id."""
    return catalog.lookup(name)
