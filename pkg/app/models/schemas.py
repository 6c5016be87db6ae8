from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, field_validator

import config


class Record(BaseModel):
    schema_version: str = config.SCHEMA_VERSION


class TreesRecord(Record):
    n: int
    count: int
    trees: List[str]


class ComplexStats(Record):
    n: int
    vertices: int
    edges: int
    squares: int
    pentagons: int
    mis_edges: int


class MisReport(Record):
    n: int
    vertices: int
    mis_edges: int
    mis_squares: int
    connected: bool
    touches_all: bool
    h1_rank: int


class PresentationRecord(Record):
    n: int
    provenance: str
    listing: Optional[str] = None
    simplified: bool
    generators: List[str]
    relators: List[List[Tuple[str, int]]]
    counts: Dict[str, int]


class HomologyReport(Record):
    n: int
    provenance: str
    fill: Optional[str] = None  # None for scheme provenance
    generators: int
    relators: int
    free_rank: int
    torsion: List[int]
    verdict: str


class CoherenceReport(Record):
    n: int
    zeta_order: int  # 0 = infinite cyclic
    generator_exponents: Dict[str, int]
    image_gcd: int
    image_order: Optional[int]  # None = infinite
    pentagon_order: Optional[int]
    coherent: bool


class GraftRecord(Record):
    pattern: str
    arguments: List[str]
    result: str
    leaves: int


class Theorem1Report(Record):
    n: int
    n_prime: int
    bracket: Tuple[int, int, int]
    reached: List[Tuple[int, int, int]]
    expected: List[Tuple[int, int, int]]
    monotone: bool
    covered: bool
    quotient_free_rank: int
    quotient_torsion: List[int]


RECORD_MODELS = [
    TreesRecord,
    ComplexStats,
    MisReport,
    PresentationRecord,
    HomologyReport,
    CoherenceReport,
    GraftRecord,
    Theorem1Report,
]


class Config(BaseModel):
    max_n: int = config.DEFAULT_MAX_N
    fill: str = config.DEFAULT_FILL
    output_format: str = config.DEFAULT_FORMAT
    seed: int = config.DEFAULT_SEED
    log_level: str = config.LOG_LEVEL

    @field_validator("max_n")
    @classmethod
    def check_max_n(cls, v: int) -> int:
        if not 1 <= v <= config.MAX_N_CAP:
            raise ValueError(f"max_n must lie in 1..{config.MAX_N_CAP}, got {v}")
        return v

    @field_validator("fill")
    @classmethod
    def check_fill(cls, v: str) -> str:
        if v not in config.FILL_POLICIES:
            raise ValueError(f"fill must be one of {config.FILL_POLICIES}")
        return v

    @field_validator("output_format")
    @classmethod
    def check_format(cls, v: str) -> str:
        if v not in config.OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {config.OUTPUT_FORMATS}")
        return v

    @field_validator("seed")
    @classmethod
    def check_seed(cls, v: int) -> int:
        if v < 0:
            raise ValueError("seed must be non-negative")
        return v

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, v: str) -> str:
        v = v.upper()
        if v not in config.LOG_LEVELS:
            raise ValueError(f"log level must be one of {config.LOG_LEVELS}")
        return v
