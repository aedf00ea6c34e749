"""
Copyright (c) 2025 legreal contributors
This file is part of legreal (Legendrian realization toolkit).
See LICENSE file for details.
"""

"""
Wire documents (JSON) for fronts, graphs, curves, open books and surgery
diagrams.

Every document is a pydantic model with a fixed "format" tag and version.
Rationals travel as {"num": "<int>", "den": "<positive int>"}; on input the
shorthands "3/2", "-4" and plain integers are accepted as well. Dumping with
`to_document` always emits the canonical form, so parse -> dump is byte
stable.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from scripts.errors import SchemaError
from scripts.utils import parse_rational

logger = logging.getLogger(__name__)

DocT = TypeVar("DocT", bound=BaseModel)


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RationalDoc(_Doc):
    num: str
    den: str

    @model_validator(mode="before")
    @classmethod
    def _accept_shorthand(cls, data: Any) -> Any:
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            value = parse_rational(data)
            return {"num": str(value.numerator), "den": str(value.denominator)}
        return data

    @field_validator("num")
    @classmethod
    def _check_num(cls, v: str) -> str:
        int(v)
        return v

    @field_validator("den")
    @classmethod
    def _check_den(cls, v: str) -> str:
        if int(v) <= 0:
            raise ValueError("denominator must be a positive integer")
        return v

    @property
    def value(self) -> Fraction:
        return Fraction(int(self.num), int(self.den))

    @classmethod
    def of(cls, value: Fraction) -> "RationalDoc":
        value = Fraction(value)
        return cls(num=str(value.numerator), den=str(value.denominator))


class PointDoc(_Doc):
    y: RationalDoc
    z: RationalDoc


class StrandDoc(_Doc):
    closed: bool
    points: List[PointDoc] = Field(min_length=2)
    cusps: List[int] = Field(default_factory=list)


class VertexEndDoc(_Doc):
    strand: int = Field(ge=0)
    end: Literal["start", "end"]


class DiagramVertexDoc(_Doc):
    position: PointDoc
    ends: List[VertexEndDoc] = Field(default_factory=list)


class FrontDocument(_Doc):
    format: Literal["legreal-front"] = "legreal-front"
    version: Literal[1] = 1
    strands: List[StrandDoc] = Field(default_factory=list)
    vertices: List[DiagramVertexDoc] = Field(default_factory=list)


class GraphVertexDoc(_Doc):
    id: int = Field(ge=0)
    position: PointDoc


class GraphEdgeDoc(_Doc):
    id: int = Field(ge=0)
    source: int = Field(ge=0)
    target: int = Field(ge=0)
    points: List[PointDoc] = Field(min_length=2)
    cusps: List[int] = Field(default_factory=list)


class GraphDocument(_Doc):
    """LGF: a Legendrian graph front with vertex and edge tables"""

    format: Literal["legreal-graph"] = "legreal-graph"
    version: Literal[1] = 1
    name: Optional[str] = None
    vertices: List[GraphVertexDoc]
    edges: List[GraphEdgeDoc]


class PassDoc(_Doc):
    handle: int = Field(ge=0)
    direction: Literal["with_core", "against_core"]
    rank: int = Field(ge=1)


class CurveDocument(_Doc):
    """CRV: cyclic list of 1-handle passes; chords are implied by consecutive passes"""

    format: Literal["legreal-curve"] = "legreal-curve"
    version: Literal[1] = 1
    name: Optional[str] = None
    passes: List[PassDoc] = Field(min_length=1)
    reference: Optional[Dict[str, Any]] = None


class WordEntryDoc(_Doc):
    sign: Literal[1, -1]
    generator: Optional[str] = None
    chain: Optional[List[str]] = None
    passes: Optional[List[PassDoc]] = None

    @model_validator(mode="after")
    def _exactly_one_curve(self) -> "WordEntryDoc":
        given = [x for x in (self.generator, self.chain, self.passes) if x is not None]
        if len(given) != 1:
            raise ValueError("word entry needs exactly one of generator, chain, passes")
        return self


class OpenBookDocument(_Doc):
    """OBK: page topology plus the signed Dehn twist word; word[0] is applied first"""

    format: Literal["legreal-openbook"] = "legreal-openbook"
    version: Literal[1] = 1
    genus: int = Field(ge=0)
    boundary: int = Field(ge=1)
    word: List[WordEntryDoc] = Field(default_factory=list)


class SurgeryComponentDoc(_Doc):
    name: str
    group: Literal["word", "cancellation"]
    coefficient: Literal[1, -1]
    level: RationalDoc
    tb: int
    rot: int
    front: StrandDoc


class SurgeryDocument(_Doc):
    """SRG: contact (+1/-1) surgery link"""

    format: Literal["legreal-surgery"] = "legreal-surgery"
    version: Literal[1] = 1
    genus: int
    boundary: int
    epsilon: RationalDoc
    components: List[SurgeryComponentDoc] = Field(default_factory=list)


DOCUMENT_TYPES: Dict[str, Type[BaseModel]] = {
    "legreal-front": FrontDocument,
    "legreal-graph": GraphDocument,
    "legreal-curve": CurveDocument,
    "legreal-openbook": OpenBookDocument,
    "legreal-surgery": SurgeryDocument,
}


def load_document(model_cls: Type[DocT], data: Any) -> DocT:
    """
    Validate raw JSON data against a document model

    Raises:
        SchemaError: with the pydantic error list as details
    """
    try:
        return model_cls.model_validate(data)
    except ValidationError as e:
        details = [
            {"kind": "schema", "location": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in e.errors()
        ]
        logger.warning(f"{model_cls.__name__} rejected: {len(details)} schema error(s)")
        raise SchemaError(f"invalid {model_cls.__name__}", details) from e


def detect_format(data: Any) -> Type[BaseModel]:
    if not isinstance(data, dict) or data.get("format") not in DOCUMENT_TYPES:
        raise SchemaError("unknown document format", [{"kind": "schema", "message": "missing or unknown 'format'"}])
    return DOCUMENT_TYPES[data["format"]]


def to_document(model: BaseModel) -> Dict[str, Any]:
    """Canonical JSON-ready dict (declared field order, optional fields omitted when unset)"""
    return model.model_dump(mode="json", exclude_none=True)
