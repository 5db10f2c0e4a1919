"""
JSON documents for fans and maps.

Matrices are row-major with rows indexing codomain coordinates, so β(e_j) is
column j. Integers whose magnitude exceeds 2^53 - 1 are written as decimal
strings and accepted in either form.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError

from .coloured import ColouredFan, ColouredLattice, make_coloured_cone
from .config import JSON_INDENT, JSON_SAFE_INTEGER_MAX
from .errors import DimensionMismatchError, DocumentParseError, DocumentValidationError
from .lattice import IntMatrix
from .stacky import StackyColouredFan, StackyMap, base_coloured_lattice, validate_stacky_fan

logger = logging.getLogger(__name__)


def _read_int(value):
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, str):
        text = value.strip()
        if not text.lstrip("-").isdigit():
            raise ValueError(f"{value!r} is not a decimal integer")
        return int(text)
    return value


def _write_int(value: int):
    return str(value) if abs(value) > JSON_SAFE_INTEGER_MAX else value


BigInt = Annotated[int, BeforeValidator(_read_int), PlainSerializer(_write_int)]
Matrix = List[List[BigInt]]


class _Entry(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ColourEntry(_Entry):
    label: str = Field(description="Colour label")
    point: List[BigInt] = Field(description="Colour point u_α in N")


class LatticeEntry(_Entry):
    rank: int = Field(ge=0, description="Rank of N")
    colours: List[ColourEntry] = Field(default_factory=list)


class ConeEntry(_Entry):
    generators: Matrix = Field(default_factory=list, description="Generators of the cone")
    colours: List[str] = Field(default_factory=list, description="Colour labels of the coloured cone")


class FanEntry(_Entry):
    maximal_cones: List[ConeEntry] = Field(default_factory=list)


class BetaEntry(_Entry):
    codomain_rank: int = Field(ge=0, description="Rank of L")
    matrix: Matrix = Field(description="beta as rows of L-coordinates")
    codomain_colour_points: Optional[Dict[str, List[BigInt]]] = Field(
        default=None, description="Expected β(u_α); checked when given"
    )


class FanDocument(_Entry):
    name: Optional[str] = None
    lattice: LatticeEntry
    fan: FanEntry = Field(default_factory=FanEntry)
    beta: Optional[BetaEntry] = None


class MapDocument(_Entry):
    name: Optional[str] = None
    domain: Union[FanDocument, str] = Field(description="Inline fan document or a path relative to this document")
    codomain: Union[FanDocument, str]
    Phi: Matrix
    phi: Matrix


Document = Union[FanDocument, MapDocument]


def _location(loc: Sequence) -> str:
    path = "$"
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def parse_document(data: Union[bytes, str]) -> Document:
    """Parse UTF-8 JSON text into a FanDocument, or a MapDocument when a 'domain' key is present."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentParseError("document is not UTF-8", f"byte {e.start}")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as e:
        raise DocumentParseError(e.msg, f"line {e.lineno} column {e.colno}")
    if not isinstance(raw, dict):
        raise DocumentParseError("top-level value must be an object", "$")
    model = MapDocument if "domain" in raw else FanDocument
    try:
        document = model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise DocumentParseError(first["msg"], _location(first["loc"]))
    for fan_document in _fan_documents(document):
        _check_labels(fan_document)
    return document


def _fan_documents(document: Document) -> List[FanDocument]:
    if isinstance(document, FanDocument):
        return [document]
    return [d for d in (document.domain, document.codomain) if isinstance(d, FanDocument)]


def _check_labels(document: FanDocument) -> None:
    labels = [c.label for c in document.lattice.colours]
    repeated = sorted({a for a in labels if labels.count(a) > 1})
    if repeated:
        raise DocumentValidationError("duplicate colour label", ", ".join(repeated))


def serialize(document: Document) -> str:
    """Canonical JSON text: sorted keys, fixed indent, trailing newline."""
    payload = document.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=JSON_INDENT, ensure_ascii=False) + "\n"


def dumps_report(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=JSON_INDENT, ensure_ascii=False)


def read_document(path: Union[str, Path]) -> Document:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise DocumentParseError(e.strerror or "cannot read file", str(path))
    logger.debug(f"read {len(data)} bytes from {path}")
    return parse_document(data)


def _matrix(rows: Matrix, cols: int, what: str) -> IntMatrix:
    try:
        return IntMatrix.from_rows(rows, cols=cols)
    except (DimensionMismatchError, ValueError) as e:
        raise DocumentValidationError("matrix shape", f"{what}: {e}")


def to_coloured_fan(document: FanDocument) -> ColouredFan:
    """Build the coloured fan without checking the fan axioms."""
    _check_labels(document)
    rank = document.lattice.rank
    for colour in document.lattice.colours:
        if len(colour.point) != rank:
            raise DocumentValidationError("colour point rank", f"u_{colour.label} has {len(colour.point)} coordinates")
    lattice = ColouredLattice.of(rank, {c.label: c.point for c in document.lattice.colours})
    cones = []
    for index, entry in enumerate(document.fan.maximal_cones):
        try:
            cones.append(make_coloured_cone(entry.generators, entry.colours, rank))
        except DimensionMismatchError as e:
            raise DocumentValidationError("generator rank", f"maximal_cones[{index}]: {e.reason}")
    return ColouredFan(lattice=lattice, maximal_cones=tuple(cones))


def to_stacky_fan(document: FanDocument, strict: bool = True) -> StackyColouredFan:
    """
    Build (Σᶜ, β); β defaults to the identity when the document has none.

    With strict set, a fan violating SCF1 or SCF2 raises DocumentValidationError
    naming the first violated axiom.
    """
    fan = to_coloured_fan(document)
    if document.beta is None:
        beta = IntMatrix.identity(fan.rank)
    else:
        if len(document.beta.matrix) != document.beta.codomain_rank:
            raise DocumentValidationError(
                "matrix shape", f"beta has {len(document.beta.matrix)} rows, codomain_rank is {document.beta.codomain_rank}"
            )
        beta = _matrix(document.beta.matrix, fan.rank, "beta")
    s = StackyColouredFan(fan=fan, beta=beta)

    expected = document.beta.codomain_colour_points if document.beta else None
    if expected is not None:
        actual = base_coloured_lattice(s).points
        wrong = sorted(a for a in set(actual) | set(expected) if tuple(expected.get(a, ())) != actual.get(a))
        if wrong:
            raise DocumentValidationError("codomain colour points", f"β(u_α) differs for {wrong}")

    if strict:
        report = validate_stacky_fan(s)
        if not report.valid:
            first = report.violations[0]
            raise DocumentValidationError(first.name, first.witness or "")
    return s


def _resolve(entry: Union[FanDocument, str], base: Optional[Path]) -> FanDocument:
    if isinstance(entry, FanDocument):
        return entry
    path = Path(entry)
    if not path.is_absolute() and base is not None:
        path = base / path
    document = read_document(path)
    if not isinstance(document, FanDocument):
        raise DocumentParseError("expected a fan document", str(path))
    return document


def load_map(document: MapDocument, base: Optional[Path] = None) -> StackyMap:
    """Resolve domain and codomain (paths relative to base) and build the candidate map."""
    domain = to_stacky_fan(_resolve(document.domain, base))
    codomain = to_stacky_fan(_resolve(document.codomain, base))
    return StackyMap(
        domain=domain,
        codomain=codomain,
        Phi=_matrix(document.Phi, domain.fan.rank, "Phi"),
        phi=_matrix(document.phi, domain.codomain_rank, "phi"),
    )


def fan_entry(fan: ColouredFan) -> FanEntry:
    return FanEntry(maximal_cones=[
        ConeEntry(generators=[list(r) for r in cc.cone.rays], colours=sorted(cc.colour_set))
        for cc in fan.maximal_cones
    ])


def lattice_entry(lattice: ColouredLattice) -> LatticeEntry:
    return LatticeEntry(
        rank=lattice.rank,
        colours=[ColourEntry(label=c.label, point=list(c.point)) for c in lattice.colours],
    )


def matrix_entry(M: IntMatrix) -> Matrix:
    return [list(row) for row in M.entries]


def fan_document(fan: ColouredFan, beta: Optional[IntMatrix] = None, name: Optional[str] = None) -> FanDocument:
    beta_entry = None
    if beta is not None:
        beta_entry = BetaEntry(codomain_rank=beta.rows, matrix=matrix_entry(beta))
    return FanDocument(name=name, lattice=lattice_entry(fan.lattice), fan=fan_entry(fan), beta=beta_entry)


def stacky_document(s: StackyColouredFan, name: Optional[str] = None) -> FanDocument:
    return fan_document(s.fan, s.beta, name)


def map_document(m: StackyMap, name: Optional[str] = None) -> MapDocument:
    return MapDocument(
        name=name,
        domain=stacky_document(m.domain),
        codomain=stacky_document(m.codomain),
        Phi=matrix_entry(m.Phi),
        phi=matrix_entry(m.phi),
    )
