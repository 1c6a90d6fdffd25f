"""Per-tissue radiobiological parameters: validation, file format, lookup.

The parameter file is YAML with a top-level ``format_version`` and a
``tissues`` list.  Unknown keys are rejected rather than ignored so that a
typo in a clinical parameter file fails loudly instead of silently changing
a dose calculation.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import yaml

from .diagnostics import TissueLibraryError

FORMAT_VERSION = 1


class TissueKind(enum.Enum):
    TARGET = "target"
    OAR = "oar"


# Fields only one kind of tissue may carry.
_TARGET_ONLY = ("t_pot", "t_k")
_OAR_ONLY = ("d_rec", "td50", "slope_m")


@dataclass(frozen=True)
class TissueParams:
    """Radiobiological constants for one target volume or organ at risk.

    Units: alpha_beta, d_t, td50 in Gy; alpha, p_unsc, alpha_unsc in 1/Gy;
    mu in 1/h; t_pot and t_k in days; d_rec and d_prol in Gy/day;
    gamma_over_alpha and slope_m dimensionless.
    """

    name: str
    kind: TissueKind
    alpha_beta: float
    alpha: float
    mu: float
    d_t: float | None = None
    gamma_over_alpha: float | None = None
    t_pot: float | None = None
    t_k: float | None = None
    d_rec: float | None = None
    d_prol: float | None = None
    td50: float | None = None
    slope_m: float | None = None
    p_unsc: float | None = None
    alpha_unsc: float | None = None

    def __post_init__(self):
        if self.d_t is None:
            # Linear tail of the survival curve starts near twice alpha/beta.
            object.__setattr__(self, "d_t", 2.0 * self.alpha_beta)
        _validate(self)

    @property
    def has_ntcp_fields(self) -> bool:
        return self.td50 is not None and self.slope_m is not None

    @property
    def has_cancer_fields(self) -> bool:
        return self.p_unsc is not None and self.alpha_unsc is not None


def default_gamma_over_alpha(params: TissueParams) -> float:
    """Slope making the high-dose linear tail tangent to the LQ curve at d_t.

    d/dd of d*(1 + d/(alpha/beta)) evaluated at d = d_t.
    """
    return 1.0 + 2.0 * params.d_t / params.alpha_beta


def _fail(name: str, field: str, reason: str) -> None:
    raise TissueLibraryError(f"tissue '{name}': field '{field}' {reason}")


def _validate(p: TissueParams) -> None:
    if not p.name or not isinstance(p.name, str):
        raise TissueLibraryError("tissue record without a usable name")
    if not isinstance(p.kind, TissueKind):
        _fail(p.name, "kind", "must be 'target' or 'oar'")

    positive = {"alpha_beta": p.alpha_beta, "alpha": p.alpha, "mu": p.mu, "d_t": p.d_t}
    for field_name, value in positive.items():
        if not isinstance(value, (int, float)) or not value > 0:
            _fail(p.name, field_name, "must be > 0")

    if p.kind is TissueKind.TARGET:
        if p.t_pot is None:
            _fail(p.name, "t_pot", "is required for target tissues")
        if p.t_k is None:
            _fail(p.name, "t_k", "is required for target tissues")
        for field_name in _OAR_ONLY:
            if getattr(p, field_name) is not None:
                _fail(p.name, field_name, "is only valid for organ-at-risk tissues")
        if not p.t_pot > 0:
            _fail(p.name, "t_pot", "must be > 0")
        if p.t_k < 0:
            _fail(p.name, "t_k", "must be >= 0")
    else:
        if p.d_rec is None:
            _fail(p.name, "d_rec", "is required for organ-at-risk tissues")
        for field_name in _TARGET_ONLY:
            if getattr(p, field_name) is not None:
                _fail(p.name, field_name, "is only valid for target tissues")
        if p.d_rec < 0:
            _fail(p.name, "d_rec", "must be >= 0")

    if p.gamma_over_alpha is not None and not p.gamma_over_alpha > 0:
        _fail(p.name, "gamma_over_alpha", "must be > 0 when present")
    if p.d_prol is not None and p.d_prol < 0:
        _fail(p.name, "d_prol", "must be >= 0 when present")

    # Complication-model fields come as a pair.
    if (p.td50 is None) != (p.slope_m is None):
        _fail(p.name, "td50", "and slope_m must be given together")
    if p.td50 is not None and not p.td50 > 0:
        _fail(p.name, "td50", "must be > 0")
    if p.slope_m is not None and not p.slope_m > 0:
        _fail(p.name, "slope_m", "must be > 0")

    if (p.p_unsc is None) != (p.alpha_unsc is None):
        _fail(p.name, "p_unsc", "and alpha_unsc must be given together")
    if p.p_unsc is not None and p.p_unsc < 0:
        _fail(p.name, "p_unsc", "must be >= 0")
    if p.alpha_unsc is not None and not p.alpha_unsc > 0:
        _fail(p.name, "alpha_unsc", "must be > 0")


_RECORD_FIELDS = tuple(f.name for f in fields(TissueParams))


def load_library(text: str) -> list[TissueParams]:
    """Parse a tissue parameter document into validated records, in file order."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise TissueLibraryError(f"tissue file does not parse: {exc}") from exc
    if doc is None:
        return []
    if not isinstance(doc, dict):
        raise TissueLibraryError("tissue file must be a mapping with 'format_version' and 'tissues'")

    unknown = set(doc) - {"format_version", "tissues"}
    if unknown:
        raise TissueLibraryError(f"unknown top-level keys: {sorted(unknown)}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise TissueLibraryError(
            f"unsupported format_version {doc.get('format_version')!r}, expected {FORMAT_VERSION}"
        )

    records = doc.get("tissues") or []
    if not isinstance(records, list):
        raise TissueLibraryError("'tissues' must be a list of records")

    tissues: list[TissueParams] = []
    seen: set[str] = set()
    for i, raw in enumerate(records, start=1):
        if not isinstance(raw, dict):
            raise TissueLibraryError(f"tissue record {i} is not a mapping")
        name = raw.get("name", f"record {i}")
        unknown = set(raw) - set(_RECORD_FIELDS)
        if unknown:
            raise TissueLibraryError(f"tissue '{name}': unknown fields {sorted(unknown)}")
        kind_raw = raw.get("kind")
        try:
            kind = TissueKind(kind_raw)
        except ValueError:
            raise TissueLibraryError(
                f"tissue '{name}': field 'kind' must be 'target' or 'oar', got {kind_raw!r}"
            ) from None
        params = TissueParams(**{**raw, "kind": kind})
        if params.name in seen:
            raise TissueLibraryError(f"duplicate tissue name '{params.name}'")
        seen.add(params.name)
        tissues.append(params)
    return tissues


def save_library(tissues: list[TissueParams]) -> str:
    """Serialize records back to the documented YAML schema."""
    records = []
    for t in tissues:
        rec = {k: v for k, v in asdict(t).items() if v is not None}
        rec["kind"] = t.kind.value
        records.append(rec)
    return yaml.safe_dump(
        {"format_version": FORMAT_VERSION, "tissues": records},
        sort_keys=False,
        allow_unicode=True,
    )


def _seed_path() -> Path:
    return Path(resources.files("eqdose").joinpath("data/tissues.yaml"))  # type: ignore[arg-type]


@dataclass(frozen=True)
class TissueLibrary:
    """Immutable, name-indexed view of a loaded parameter file."""

    tissues: tuple[TissueParams, ...]
    checksum: str
    source: str

    @classmethod
    def from_text(cls, text: str, source: str = "<inline>") -> "TissueLibrary":
        tissues = load_library(text)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return cls(tissues=tuple(tissues), checksum=digest, source=source)

    @classmethod
    def from_file(cls, path: str | Path) -> "TissueLibrary":
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))

    @classmethod
    def default(cls) -> "TissueLibrary":
        return cls.from_file(_seed_path())

    @property
    def names(self) -> list[str]:
        return [t.name for t in self.tissues]

    def get(self, name: str) -> TissueParams:
        for t in self.tissues:
            if t.name == name:
                return t
        raise KeyError(f"unknown tissue '{name}'; available: {', '.join(self.names)}")
