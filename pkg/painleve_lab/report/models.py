"""Report schema. Bump SCHEMA_VERSION on any field change."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1.1"


class Discrepancy(BaseModel):
    topic: str
    printed: str
    mechanical: str
    note: str = ""


class EquationInput(BaseModel):
    id: str
    dsl: str
    independents: List[str]
    dependent: str
    parameters: Dict[str, str] = Field(default_factory=dict)


class SymmetryFragment(BaseModel):
    equation_id: str
    generators: Dict[str, str]
    residuals: Dict[str, str]

    @property
    def all_vanish(self) -> bool:
        return all(r == "0" for r in self.residuals.values())


class BracketFragment(BaseModel):
    equation_id: str
    names: List[str]
    rows: List[List[str]]
    antisymmetric: bool
    jacobi: bool


class AdjointFragment(BaseModel):
    equation_id: str
    names: List[str]
    rows: List[List[str]]
    representatives: List[str] = Field(default_factory=list)
    equivalent_pairs: List[List[str]] = Field(default_factory=list)


class ReductionModel(BaseModel):
    label: str
    generator: str
    invariants: str
    equation: str
    order: int
    verified: bool
    first_order: bool = False


class FirstIntegralModel(BaseModel):
    source: str
    exact: bool
    shift: Optional[str] = None
    constant: Optional[str] = None
    equation: Optional[str] = None
    residual: Optional[str] = None


class ReductionFragment(BaseModel):
    equation_id: str
    reductions: List[ReductionModel] = Field(default_factory=list)
    integrals: List[FirstIntegralModel] = Field(default_factory=list)
    order_reductions: Dict[str, str] = Field(default_factory=dict)


class BalanceModel(BaseModel):
    exponent: str
    leading: str
    arbitrary: bool
    resonance_polynomial: Optional[str] = None
    resonances: List[str] = Field(default_factory=list)
    classification: str
    series: List[str] = Field(default_factory=list)
    arbitrary_indices: List[int] = Field(default_factory=list)
    residuals: Dict[str, str] = Field(default_factory=dict)
    note: str = ""


class ArsPassModel(BaseModel):
    equation: str
    balances: List[BalanceModel] = Field(default_factory=list)
    passes: bool
    note: str = ""


class ArsFragment(BaseModel):
    equation_id: str
    direct: ArsPassModel
    inverted: Optional[ArsPassModel] = None
    inversion_factor: Optional[str] = None
    passes: bool
    verdict: str


class WtcBranchModel(BaseModel):
    exponent: str
    leading: str
    resonance_polynomial: Optional[str] = None
    resonances: List[str] = Field(default_factory=list)
    classification: str
    statuses: Dict[str, str] = Field(default_factory=dict)
    expected_arbitrary: List[int] = Field(default_factory=list)
    passes: bool = False
    note: str = ""


class WtcPassModel(BaseModel):
    equation: str
    branches: List[WtcBranchModel] = Field(default_factory=list)
    passes: bool
    note: str = ""


class WtcFragment(BaseModel):
    equation_id: str
    order: int
    kruskal: bool
    direct: WtcPassModel
    inverted: Optional[WtcPassModel] = None
    passes: bool


class NumericFragment(BaseModel):
    equation_id: str
    sample: str
    samples_version: int
    residual_slope: Optional[float] = None
    expected_slope: float
    deviations: Dict[str, float] = Field(default_factory=dict)
    window: List[float] = Field(default_factory=list)
    tolerance: float
    deviation_tolerance: float = 1e-6
    monotone: bool = True
    failed: List[str] = Field(default_factory=list)
    passes: bool


class AnalysisReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tool_version: str
    command: str
    arguments: List[str] = Field(default_factory=list)
    input: EquationInput
    symmetries: Optional[SymmetryFragment] = None
    brackets: Optional[BracketFragment] = None
    adjoint: Optional[AdjointFragment] = None
    reductions: Optional[ReductionFragment] = None
    ars: Optional[ArsFragment] = None
    wtc: Optional[WtcFragment] = None
    numeric: List[NumericFragment] = Field(default_factory=list)
    verdicts: Dict[str, bool] = Field(default_factory=dict)
    discrepancies: List[Discrepancy] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    failures: Dict[str, str] = Field(default_factory=dict)

    @property
    def passes(self) -> bool:
        return all(self.verdicts.values())
