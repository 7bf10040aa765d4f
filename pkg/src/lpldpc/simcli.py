"""Monte Carlo experiment drivers with reproducible seeding and CSV output.

All randomness flows through per-trial substreams (see channel.trial_rng),
so a config plus master seed fixes every result regardless of the order in
which cells or trials execute.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .channel import ChannelParams, MapSpec, apply_map, bpsk, normalized_llr, transmit_awgn, trial_rng
from .lpdec import lp_decode
from .pseudo import awgnc_pseudoweight, canonical_completion, pseudoweight_bound
from .tanner import DisconnectedGraphError, GenerationError, bfs_tiers, generate_regular, parse_alist
from .witness import (
    DEAD_BAND,
    boundary_set,
    check_expansion,
    check_feasible,
    derive_params,
    find_delta_matching,
    high_noise_set,
    weights_from_matching,
    witness_search,
)

__all__ = [
    "GraphSource",
    "ScanSpec",
    "ProofSpec",
    "ExperimentConfig",
    "CellResult",
    "ScanRow",
    "WitnessRateRow",
    "run_wer",
    "run_pseudo_scan",
    "run_witness_rate",
    "emit_csv",
]

MODES = ("wer", "pseudo-scan", "witness-rate")


@dataclass(frozen=True)
class GraphSource:
    """Either an alist path or a (n, dv, dc, seed) generator spec."""

    path: str | None = None
    n: int | None = None
    dv: int | None = None
    dc: int | None = None
    seed: int | None = None

    def __post_init__(self):
        by_path = self.path is not None
        by_gen = None not in (self.n, self.dv, self.dc, self.seed)
        if by_path == by_gen:
            raise ValueError("graph source needs either 'path' or all of n/dv/dc/seed")

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ValueError("graph source must be an object")
        return cls(path=obj.get("path"), n=obj.get("n"), dv=obj.get("dv"),
                   dc=obj.get("dc"), seed=obj.get("seed"))

    def load(self):
        if self.path is not None:
            with open(self.path, "rb") as fh:
                return parse_alist(fh.read())
        return generate_regular(self.n, self.dv, self.dc, self.seed)


@dataclass(frozen=True)
class ScanSpec:
    """Pseudo-weight scan grid: graph sizes and sampling counts."""

    n_values: tuple
    dv: int
    dc: int
    graphs_per_n: int = 1
    roots_per_graph: int = 1

    def __post_init__(self):
        if not self.n_values:
            raise ValueError("scan needs at least one n value")
        if not 3 <= self.dv < self.dc:
            raise ValueError("scan requires 3 <= dv < dc")
        if self.graphs_per_n < 1 or self.roots_per_graph < 1:
            raise ValueError("scan counts must be >= 1")


@dataclass(frozen=True)
class ProofSpec:
    """Witness-rate knobs: truncation value and optional overrides."""

    w: float = 1.0
    delta_hat: float | None = None
    kappa: float | None = None
    verify_smax: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: mode, graph, map list, noise grid, trials, seed."""

    mode: str
    trials: int
    seed: int
    graph: GraphSource | None = None
    maps: tuple = ()
    sigma2: tuple = ()
    out: str | None = None
    random_codeword: bool = False
    scan: ScanSpec | None = None
    proof: ProofSpec | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if any(not (math.isfinite(s) and s > 0) for s in self.sigma2):
            raise ValueError("sigma2 grid entries must be positive")
        if self.mode == "wer":
            if self.graph is None or not self.maps or not self.sigma2:
                raise ValueError("wer mode needs a graph, at least one map, and a sigma2 grid")
        elif self.mode == "pseudo-scan":
            if self.scan is None:
                raise ValueError("pseudo-scan mode needs a 'scan' section")
        elif self.mode == "witness-rate":
            if self.graph is None or not self.sigma2:
                raise ValueError("witness-rate mode needs a graph and a sigma2 grid")
            proof = self.proof or ProofSpec()
            if len(self.maps) != 1 or self.maps[0].kind != "threshold":
                raise ValueError("witness-rate mode needs exactly one threshold map")
            if self.maps[0].param != proof.w:
                raise ValueError("threshold W must match the proof W")

    @classmethod
    def from_json(cls, obj, mode=None):
        """Build a config from a parsed JSON object (or a path to one)."""
        if isinstance(obj, (str, bytes)):
            with open(obj, "r") as fh:
                obj = json.load(fh)
        if not isinstance(obj, dict):
            raise ValueError("config must be a JSON object")
        cfg_mode = obj.get("mode", mode)
        if mode is not None and obj.get("mode") not in (None, mode):
            raise ValueError(f"config mode {obj['mode']!r} conflicts with requested {mode!r}")
        if cfg_mode is None:
            raise ValueError("mode missing (give it in the config or on the command line)")
        scan = obj.get("scan")
        if scan is not None:
            scan = ScanSpec(n_values=tuple(scan["n_values"]), dv=scan["dv"], dc=scan["dc"],
                            graphs_per_n=scan.get("graphs_per_n", 1),
                            roots_per_graph=scan.get("roots_per_graph", 1))
        proof = obj.get("proof")
        if proof is not None:
            proof = ProofSpec(w=proof.get("w", 1.0), delta_hat=proof.get("delta_hat"),
                              kappa=proof.get("kappa"), verify_smax=proof.get("verify_smax"))
        return cls(
            mode=cfg_mode,
            trials=obj.get("trials", 1),
            seed=obj.get("seed", 0),
            graph=GraphSource.from_json(obj["graph"]) if "graph" in obj else None,
            maps=tuple(MapSpec.parse(s) for s in obj.get("maps", ())),
            sigma2=tuple(float(s) for s in obj.get("sigma2", ())),
            out=obj.get("out"),
            random_codeword=bool(obj.get("random_codeword", False)),
            scan=scan,
            proof=proof,
        )


@dataclass(frozen=True)
class CellResult:
    """Tallies for one (map, sigma2) cell of a WER run."""

    map: str
    sigma2: float
    trials: int
    mismatch: int
    fractional: int
    tie: int
    failures: int
    wer: float
    stderr: float


def _binomial_se(p, n):
    return math.sqrt(p * (1.0 - p) / n)


def run_wer(config):
    """Word-error-rate table over the (map, sigma2) grid.

    Transmits the all-zeros codeword unless random_codeword is set, in which
    case a uniformly random codeword is drawn per trial from a null-space
    basis (substream 1; the noise uses substream 0). A trial fails when the
    decoder does not return the transmitted codeword; integral-mismatch,
    fractional and tie outcomes are tallied separately.
    """
    g = config.graph.load()
    basis = None
    if config.random_codeword:
        basis = gf2.nullspace_basis(g.parity_check_matrix())
    results = []
    zeros = np.zeros(g.n, dtype=np.uint8)
    for spec in config.maps:
        for s2 in config.sigma2:
            params = ChannelParams(s2)
            mismatch = fractional = tie = 0
            for t in range(config.trials):
                if basis is not None and basis.shape[0] > 0:
                    msg = trial_rng(config.seed, t, stream=1).integers(0, 2, basis.shape[0])
                    x = (msg @ basis) % 2
                else:
                    x = zeros
                y = transmit_awgn(bpsk(x), params, config.seed, t)
                lamp = apply_map(spec, normalized_llr(y, params))
                out = lp_decode(g, lamp)
                if out.status == "tie":
                    tie += 1
                elif out.status == "fractional":
                    fractional += 1
                elif (out.codeword != x).any():
                    mismatch += 1
            failures = mismatch + fractional + tie
            wer = failures / config.trials
            results.append(CellResult(
                map=str(spec), sigma2=s2, trials=config.trials,
                mismatch=mismatch, fractional=fractional, tie=tie,
                failures=failures, wer=wer, stderr=_binomial_se(wer, config.trials),
            ))
    return results


@dataclass(frozen=True)
class ScanRow:
    """One tier completion: its scaling, pseudo-weight and growth bound."""

    n: int
    dv: int
    dc: int
    graph_seed: int
    root: int
    alpha: float
    pseudoweight: float
    bound: float


def _connected_graph(n, dv, dc, master_seed, n_index, graph_index):
    # Rejects the rare disconnected sample; the retry index keeps determinism.
    for attempt in range(50):
        gseed = int(np.random.SeedSequence(
            entropy=master_seed, spawn_key=(n_index, graph_index, attempt)
        ).generate_state(1)[0])
        try:
            g = generate_regular(n, dv, dc, gseed)
            bfs_tiers(g, 0)
            return g, gseed
        except (DisconnectedGraphError, GenerationError):
            continue
    raise RuntimeError(f"no connected ({dv}, {dc})-regular graph found at n={n}")


def run_pseudo_scan(config):
    """Pseudo-weight versus length scan for tier completions.

    For each n, samples graphs and roots and records the completion's
    pseudo-weight next to the growth bound beta' * n^beta.
    """
    sc = config.scan
    boundcache = {}
    rows = []
    for ni, n in enumerate(sc.n_values):
        if n not in boundcache:
            boundcache[n] = pseudoweight_bound(sc.dv, sc.dc, n).bound
        for gi in range(sc.graphs_per_n):
            g, gseed = _connected_graph(n, sc.dv, sc.dc, config.seed, ni, gi)
            rng = trial_rng(config.seed, ni * 10_000 + gi, stream=2)
            roots = rng.choice(n, size=min(sc.roots_per_graph, n), replace=False)
            for root in sorted(int(r) for r in roots):
                pcw, alpha = canonical_completion(g, root)
                rows.append(ScanRow(
                    n=n, dv=sc.dv, dc=sc.dc, graph_seed=gseed, root=root,
                    alpha=alpha, pseudoweight=awgnc_pseudoweight(pcw),
                    bound=boundcache[n],
                ))
    return rows


@dataclass(frozen=True)
class WitnessRateRow:
    """Per-sigma2 witness statistics and their agreement with the decoder."""

    sigma2: float
    trials: int
    witness_positive: int
    constructive_ok: int
    lp_success: int
    agreement_checked: int
    agreement: int
    dead_band: int
    expansion: str
    size_bound_violations: int


def run_witness_rate(config):
    """Compare the exact witness LP, the constructive pipeline, and the decoder.

    Per trial: high-noise set, boundary set, matching search, constructed
    weights and their feasibility check, the witness LP, and the LP decoder.
    Expansion is brute-force verified up to proof.verify_smax when given
    (rows labeled 'verified', with alpha = smax/n); otherwise rows are
    labeled 'assumed'. On verified graphs, every trial whose |U| falls under
    the matching cap also checks |U| + |boundary| <= alpha*n.
    """
    g = config.graph.load()
    vd = {len(r) for r in g.var_nbrs}
    if len(vd) != 1:
        raise ValueError("witness-rate needs a variable-regular graph")
    d_v = vd.pop()
    proof = config.proof or ProofSpec()
    spec = config.maps[0]
    alpha_exp = None
    expansion = "assumed"
    params = derive_params(proof.w, d_v, proof.delta_hat)
    if proof.verify_smax is not None:
        alpha_exp = proof.verify_smax / g.n
        verdict = check_expansion(g, params.delta_dv, proof.verify_smax)
        expansion = "verified" if verdict.ok else "assumed"
        params = derive_params(proof.w, d_v, proof.delta_hat, alpha_exp=alpha_exp)
    kappa = proof.kappa if proof.kappa is not None else params.kappa_mid
    zeros_bar = bpsk(np.zeros(g.n, dtype=np.uint8))

    rows = []
    for s2 in config.sigma2:
        ch = ChannelParams(s2)
        wpos = constructive = success_n = agree = checked = dead = viol = 0
        for t in range(config.trials):
            y = transmit_awgn(zeros_bar, ch, config.seed, t)
            lamp = apply_map(spec, normalized_llr(y, ch))
            u = high_noise_set(lamp)
            udot = boundary_set(g, u, params)
            matching = find_delta_matching(g, u, udot, params)
            built_ok = False
            if matching is not None:
                weights = weights_from_matching(g, matching, u, kappa, params)
                built_ok = check_feasible(g, weights, lamp).ok
            s_star = witness_search(g, lamp)
            out = lp_decode(g, lamp)
            success = out.is_zero_codeword()
            wpos += s_star > 0
            constructive += built_ok
            success_n += success
            if abs(s_star) > DEAD_BAND:
                checked += 1
                agree += (s_star > 0) == success
            else:
                dead += 1
            if expansion == "verified":
                an = params.alpha_exp * g.n
                if len(u) <= (an - 1.0) / (1.0 + params.gamma):
                    viol += len(u) + len(udot) > an + 1e-9
        rows.append(WitnessRateRow(
            sigma2=s2, trials=config.trials, witness_positive=wpos,
            constructive_ok=constructive, lp_success=success_n,
            agreement_checked=checked, agreement=agree, dead_band=dead,
            expansion=expansion, size_bound_violations=viol,
        ))
    return rows


def emit_csv(results, path, row_type=None):
    """Write dataclass rows as CSV: a header line plus one row per result.

    Floats are written with repr (shortest round-trip), so parsing the file
    back reproduces every field exactly. An empty result list writes the
    header only; pass ``row_type`` to name the schema in that case.
    """
    rows = list(results)
    rt = row_type if row_type is not None else (type(rows[0]) if rows else None)
    if rt is None:
        raise ValueError("row_type is required when the result list is empty")
    names = [f.name for f in dataclasses.fields(rt)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v
                             for v in (getattr(row, nm) for nm in names)])
