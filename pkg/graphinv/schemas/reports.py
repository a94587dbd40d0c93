"""Pydantic schemas for invariant reports.

Every integer that comes out of an exact computation is a decimal string so
that no consumer truncates it to 64 bits.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

DecimalInt = str
# (real, imaginary) as positional decimal strings that parse back to the same floats
ComplexEntry = tuple[str, str]


class GroupInfo(BaseModel):
    """A finitely generated abelian group up to isomorphism."""

    description: str = Field(..., description="Readable form such as 'Z^2 x Z/2'")
    free_rank: DecimalInt
    torsion: list[DecimalInt] = Field(default_factory=list)


class GraphInfo(BaseModel):
    vertices: list[str]
    edges: list[list[str]] = Field(..., description="[id, source, range] triples")
    digest: str = Field(..., description="sha256 of the canonical serialization")


class LatticeElementInfo(BaseModel):
    members: list[str]
    height: DecimalInt
    prime: bool
    join_irreducible: bool


class LatticeReport(BaseModel):
    size: DecimalInt
    elements: list[LatticeElementInfo]
    covers: list[list[str]] = Field(..., description="Hasse edges as formatted pairs")
    join_irreducibles: list[str]


class KDataReport(BaseModel):
    w: list[str]
    regular: list[str]
    k0: GroupInfo
    k1: GroupInfo
    k1_basis: list[list[DecimalInt]]
    generator_classes: dict[str, list[DecimalInt]] = Field(
        ..., description="Canonical K0 coordinates of each vertex class"
    )


class SubquotientInfo(BaseModel):
    lower: list[str]
    upper: list[str]
    k0: GroupInfo
    k1_rank: DecimalInt
    pattern: str
    cone_is_group: str


class TailReport(BaseModel):
    members: list[str]
    kind: str
    complement: list[str]
    successor: list[str]
    cycle: list[str] | None = None
    subquotient: SubquotientInfo | None = None


class ExtReport(BaseModel):
    index: str
    coefficients: str
    ext0: GroupInfo
    ext1: GroupInfo
    ext2: GroupInfo
    ext1_cocycles: list[dict[str, list[DecimalInt]]] = Field(
        default_factory=list, description="Families y_v representing generators of Ext^1"
    )
    ext2_generators: list[dict[str, list[DecimalInt]]] = Field(
        default_factory=list, description="Morphisms K1 -> Y representing generators of Ext^2"
    )


class MonoidReport(BaseModel):
    query: str
    c1: str
    c2: str
    answer: str
    support: list[list[str]] = Field(default_factory=list)
    witness: dict[str, DecimalInt] | None = None
    reason: str | None = None
    oracle: str | None = None
    oracle_depth: DecimalInt | None = None


class DiagramIsoInfo(BaseModel):
    degree: int
    status: str
    origin: str
    order_units: str
    components: dict[str, list[list[DecimalInt]]]


class PsiPair(BaseModel):
    source: str
    target: str


class CirclePairInfo(BaseModel):
    tail: str
    image: str
    tail_k0: GroupInfo
    image_k0: GroupInfo


class PsiReportInfo(BaseModel):
    psi: list[PsiPair]
    conclusion: str
    nodes_match: bool
    tau_matched: bool
    offending_tail: str | None = None
    phi1: list[DiagramIsoInfo] = Field(default_factory=list)
    phi1_exhaustive: bool | None = None
    phi0: list[DiagramIsoInfo] = Field(default_factory=list)
    phi0_exhaustive: bool | None = None
    ext2: GroupInfo | None = None
    obstruction_vanishes: bool | None = None
    circle_pairs: list[CirclePairInfo] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)


class VerdictReport(BaseModel):
    conclusion: str
    pi_proxy: list[bool]
    lattice_isomorphisms: DecimalInt
    psi: list[PsiReportInfo]
    notes: list[str] = Field(default_factory=list)


class FDReport(BaseModel):
    blocks: list[DecimalInt]
    method: str
    seed: DecimalInt | None = None
    dims: dict[str, list[DecimalInt]]
    unitary_shapes: dict[str, list[DecimalInt]]
    unitaries: dict[str, list[list[list[ComplexEntry]]]] = Field(
        ..., description="per vertex, one row-major matrix per block"
    )
    monoid_hom_verified: bool
    residual: float
    edge_residuals: dict[str, float]
    vertex_residuals: dict[str, float]


class CorpusEntry(BaseModel):
    index: DecimalInt
    graph_digest: str
    vertices: DecimalInt
    edges: DecimalInt


class CorpusBucket(BaseModel):
    invariant_digest: str
    graphs: list[CorpusEntry]
    flagged_pairs: list[list[DecimalInt]] = Field(
        default_factory=list, description="Index pairs to confirm with a full verdict"
    )


class CorpusReport(BaseModel):
    seed: DecimalInt
    count: DecimalInt
    max_vertices: DecimalInt
    max_edges: DecimalInt
    buckets: list[CorpusBucket]


class Report(BaseModel):
    """Top-level report; sections absent from a command are omitted."""

    model_config = ConfigDict(extra="forbid")

    tool_version: str
    command: str
    input_digest: str
    graph: GraphInfo | None = None
    other: GraphInfo | None = None
    lattice: LatticeReport | None = None
    kdata: list[KDataReport] | None = None
    tails: list[TailReport] | None = None
    ext: ExtReport | None = None
    monoid: MonoidReport | None = None
    verdict: VerdictReport | None = None
    fd: FDReport | None = None
    corpus: CorpusReport | None = None
    catalog: list[dict[str, Any]] | None = None
