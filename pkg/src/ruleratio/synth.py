"""Synthetic transaction corpora with planted place-in-region rules.

Each record models a short document about one region: the region token
shows up with one probability, each of the region's member places with
another, and the rest of the record is heavy-tailed noise.  The planted
(place, region) memberships are the ground truth a ranker should
recover.

Ambiguity — the reason plain count ratios struggle — is modeled by
folding a fraction of the place tokens into the noise vocabulary, so
those tokens also fire in records about unrelated regions, the way a
person's name can collide with a place name in real text.

Randomness is counter-based: record ``r`` draws from an independent
stream keyed by ``(seed, r)``, and corpus-level choices use a reserved
stream, so the corpus is a pure function of the config and generation
order cannot change the output (parallel generation equals sequential).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np
import tomli

from .transactions import DomainLabel, TransactionDatabase, parse_records

_SETUP_STREAM = 2**64 - 1


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for one corpus; equal configs generate identical corpora."""

    seed: int = 0
    n_regions: int = 20
    places_min: int = 10
    places_max: int = 10
    n_records: int = 20_000
    p_region_mention: float = 0.3
    p_place_mention: float = 0.05
    noise_vocab: int = 2_000
    noise_per_record: int = 8
    zipf_exponent: float = 1.1
    ambiguity_rate: float = 0.2
    region_skew: float = 0.0

    def __post_init__(self) -> None:
        if self.seed < 0 or self.n_records < 0 or self.noise_vocab < 0:
            raise ValueError("seed, n_records, and noise_vocab must be >= 0")
        if self.n_regions < 0 or self.noise_per_record < 0:
            raise ValueError("n_regions and noise_per_record must be >= 0")
        if not (0 <= self.places_min <= self.places_max):
            raise ValueError(
                f"need 0 <= places_min <= places_max, got "
                f"{self.places_min}..{self.places_max}"
            )
        for name in ("p_region_mention", "p_place_mention", "ambiguity_rate"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.zipf_exponent <= 0:
            raise ValueError(f"zipf_exponent must be > 0, got {self.zipf_exponent}")
        if self.region_skew < 0:
            raise ValueError(f"region_skew must be >= 0, got {self.region_skew}")
        if self.n_regions == 0 and (self.p_region_mention > 0 or self.p_place_mention > 0):
            raise ValueError("no regions to mention but mention probabilities are nonzero")


def _stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _zipf_cdf(n: int, exponent: float) -> np.ndarray:
    weights = np.arange(1, n + 1, dtype=np.float64) ** (-exponent)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    return cdf


@dataclass(frozen=True)
class _Layout:
    """Corpus-level structure drawn once from the reserved stream."""

    region_tokens: list[str]
    place_tokens: list[list[str]]  # member places per region
    pool_tokens: list[str]  # noise vocabulary incl. ambiguous places, rank order
    region_cdf: np.ndarray
    pool_cdf: np.ndarray


def _build_layout(cfg: SynthConfig) -> _Layout:
    setup = _stream(cfg.seed, _SETUP_STREAM)
    region_tokens = [f"r{i:03d}" for i in range(cfg.n_regions)]
    sizes = setup.integers(cfg.places_min, cfg.places_max + 1, size=cfg.n_regions)
    place_tokens: list[list[str]] = []
    next_place = 0
    for size in sizes:
        place_tokens.append([f"p{next_place + j:04d}" for j in range(int(size))])
        next_place += int(size)

    all_places = [tok for member in place_tokens for tok in member]
    n_ambiguous = int(round(cfg.ambiguity_rate * len(all_places)))
    ambiguous = [all_places[i] for i in setup.permutation(len(all_places))[:n_ambiguous]]
    pool = [f"n{i:05d}" for i in range(cfg.noise_vocab)] + sorted(ambiguous)
    pool_tokens = [pool[i] for i in setup.permutation(len(pool))]

    if cfg.n_regions > 0:
        region_cdf = _zipf_cdf(cfg.n_regions, cfg.region_skew) if cfg.region_skew > 0 else (
            np.arange(1, cfg.n_regions + 1, dtype=np.float64) / cfg.n_regions
        )
    else:
        region_cdf = np.array([])
    pool_cdf = _zipf_cdf(len(pool_tokens), cfg.zipf_exponent) if pool_tokens else np.array([])
    return _Layout(region_tokens, place_tokens, pool_tokens, region_cdf, pool_cdf)


def _record_tokens(cfg: SynthConfig, layout: _Layout, index: int) -> list[str]:
    rng = _stream(cfg.seed, index)
    chosen: set[str] = set()
    if cfg.n_regions > 0:
        region = int(np.searchsorted(layout.region_cdf, rng.random(), side="right"))
        region = min(region, cfg.n_regions - 1)
        if rng.random() < cfg.p_region_mention:
            chosen.add(layout.region_tokens[region])
        members = layout.place_tokens[region]
        if members:
            include = rng.random(len(members)) < cfg.p_place_mention
            chosen.update(tok for tok, keep in zip(members, include) if keep)
    if cfg.noise_per_record > 0 and layout.pool_tokens:
        draws = np.searchsorted(layout.pool_cdf, rng.random(cfg.noise_per_record), side="right")
        draws = np.minimum(draws, len(layout.pool_tokens) - 1)
        chosen.update(layout.pool_tokens[int(i)] for i in draws)
    return sorted(chosen)


def generate(
    cfg: SynthConfig,
) -> tuple[TransactionDatabase, set[tuple[str, str]], dict[str, DomainLabel]]:
    """Generate (database, ground-truth pairs, domain table) from a config."""
    layout = _build_layout(cfg)
    domain_table: dict[str, DomainLabel] = {}
    for tok in layout.region_tokens:
        domain_table[tok] = DomainLabel.ANTECEDENT
    for member in layout.place_tokens:
        for tok in member:
            domain_table[tok] = DomainLabel.CONSEQUENT
    for tok in layout.pool_tokens:
        domain_table.setdefault(tok, DomainLabel.OTHER)

    truth = {
        (place, region)
        for region, member in zip(layout.region_tokens, layout.place_tokens)
        for place in member
    }

    lines = (" ".join(_record_tokens(cfg, layout, r)) for r in range(cfg.n_records))
    db = parse_records(lines, domain_table)
    return db, truth, domain_table


# ---------------------------------------------------------------------------
# config files (flat TOML: one table of scalar keys)


def load_config(source: Union[str, Path, IO[bytes]]) -> SynthConfig:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_config(fh)
    data = tomli.load(source)
    known = {f.name for f in dataclasses.fields(SynthConfig)}
    unknown = data.keys() - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return SynthConfig(**data)


def config_to_dict(cfg: SynthConfig) -> dict:
    return dataclasses.asdict(cfg)
