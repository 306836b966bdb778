"""Experiment orchestration: analytic tables, Monte-Carlo sweeps, curves.

Every Monte-Carlo frame draws from its own counter-based RNG stream keyed
by (master seed, frame index), so results do not depend on worker count
or scheduling, and the same frame index reproduces the same frame across
decoder settings (which is what per-frame decoder comparisons rely on).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import Awgn, ChannelSpec, criteria, entropy_bounds
from .codes import SourceModel, VlcCode, encode
from .combined import CombinedConfig, rho_star, combined_decode
from .metrics import bit_error_fraction, nld
from .reporting import Report
from .tables import get_code
from .trellis import BIT_SYMBOL, TrellisConfig, viterbi_decode

_CHUNK = 256  # frames per worker task; fixed so reductions are order-stable

BER_DEFINITION = ("hamming(path_bits, transmitted_bits) / l_x per frame, "
                  "averaged over frames")


@dataclass(frozen=True)
class ExperimentConfig:
    """A Monte-Carlo sweep definition."""

    codes: tuple[str, ...]
    l_s: int
    ebn0_list: tuple[float, ...]
    t_list: tuple[object, ...] = (BIT_SYMBOL,)
    trials: int = 10_000
    master_seed: int = 0
    eta: float = 1e-6

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.eta < 1.0 / math.e:
            raise ValueError("eta must lie in (0, 1/e)")
        if self.l_s < 1:
            raise ValueError("l_s must be >= 1")
        for t in self.t_list:
            if t != BIT_SYMBOL and (not isinstance(t, int) or t < 1):
                raise ValueError(f"invalid aggregation parameter {t!r}")


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Independent counter-based stream for one frame."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((master_seed, frame_index))))


def sample_frame(code: VlcCode, source: SourceModel, l_s: int,
                 rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw an i.i.d. symbol frame and encode it: (symbol indices, bits)."""
    symbols = rng.choice(len(source), size=l_s, p=np.asarray(source.probs))
    return symbols, encode(code, symbols)


def _trellis_config(t, l_s: int) -> TrellisConfig:
    if t == BIT_SYMBOL:
        return TrellisConfig.bit_symbol(l_s)
    return TrellisConfig.aggregated(int(t), l_s)


def _sweep_chunk(args) -> dict:
    code_id, l_s, ebn0, t, master_seed, start, stop = args
    code, source = get_code(code_id)
    channel = Awgn(ebn0)
    config = _trellis_config(t, l_s)
    acc = {"frame_errors": 0, "ber_sum": 0.0, "nld_sum": 0.0,
           "ops_sum": 0, "infeasible": 0}
    for i in range(start, stop):
        rng = frame_rng(master_seed, i)
        sym_idx, bits = sample_frame(code, source, l_s, rng)
        received = channel.transmit(bits, rng)
        result = viterbi_decode(code, source, config, received, channel)
        emitted = [code.symbols[j] for j in sym_idx]
        acc["frame_errors"] += result.symbols != emitted
        acc["ber_sum"] += bit_error_fraction(result.path_bits, bits)
        acc["nld_sum"] += nld(result.symbols, emitted, l_s)
        acc["ops_sum"] += result.branch_ops
        acc["infeasible"] += not result.feasible
    return acc


def _run_chunks(tasks, workers: int):
    if workers <= 1:
        return [_sweep_chunk(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_chunk, tasks))


FER_COLUMNS = [
    "code", "l_s", "ebn0_db", "t", "trials", "fer", "fer_ci95", "ber", "nld",
    "branch_ops_mean", "infeasible", "p_crossover", "p_sync", "h_delta_s",
    "d_eta", "mepl", "vepl", "mdl", "excess_rate",
]


def run_fer_sweep(config: ExperimentConfig, workers: int = 1) -> Report:
    """Monte-Carlo FER/BER/NLD per (code, Eb/N0, T), with analytic columns."""
    report = Report(columns=FER_COLUMNS, meta={
        "kind": "fer_sweep",
        "ber_definition": BER_DEFINITION,
        "master_seed": config.master_seed,
        "eta": config.eta,
    })
    for code_id in config.codes:
        code, source = get_code(code_id)
        for ebn0 in config.ebn0_list:
            analysis = criteria(code, source, config.l_s, Awgn(ebn0),
                                eta=config.eta)
            for t in config.t_list:
                tasks = [
                    (code_id, config.l_s, ebn0, t, config.master_seed,
                     start, min(start + _CHUNK, config.trials))
                    for start in range(0, config.trials, _CHUNK)
                ]
                parts = _run_chunks(tasks, workers)
                n = config.trials
                fer = sum(p["frame_errors"] for p in parts) / n
                report.add_row(
                    code=code_id, l_s=config.l_s, ebn0_db=ebn0,
                    t=str(t), trials=n,
                    fer=fer,
                    fer_ci95=1.96 * math.sqrt(max(fer * (1 - fer), 0.0) / n),
                    ber=sum(p["ber_sum"] for p in parts) / n,
                    nld=sum(p["nld_sum"] for p in parts) / n,
                    branch_ops_mean=sum(p["ops_sum"] for p in parts) / n,
                    infeasible=sum(p["infeasible"] for p in parts),
                    p_crossover=analysis.p_crossover,
                    p_sync=analysis.p_sync,
                    h_delta_s=analysis.h_delta_s,
                    d_eta=analysis.d_eta,
                    mepl=analysis.mepl,
                    vepl=analysis.vepl,
                    mdl=analysis.mdl,
                    excess_rate=analysis.excess_rate,
                )
    return report


CRITERIA_COLUMNS = [
    "code", "l_s", "ebn0_db", "eta", "p_crossover", "d_eta", "p_sync",
    "h_delta_s", "mepl", "vepl", "mdl", "excess_rate", "h_mod_2d1",
    "h_lower_bound", "lost_mass",
]


def run_criteria_table(codes: tuple[str, ...], l_s: int, ebn0: float,
                       eta: float = 1e-6) -> Report:
    """Analytic code-selection criteria, one row per code."""
    report = Report(columns=CRITERIA_COLUMNS, meta={
        "kind": "criteria",
        "delta_pmf": {},
        "prob_strings": {},
    })
    for code_id in codes:
        code, source = get_code(code_id)
        analysis = criteria(code, source, l_s, Awgn(ebn0), eta=eta)
        lower, upper = entropy_bounds(analysis.delta_pmf, eta, code.l_M * l_s)
        report.add_row(
            code=code_id, l_s=l_s, ebn0_db=ebn0, eta=eta,
            p_crossover=analysis.p_crossover,
            d_eta=analysis.d_eta,
            p_sync=analysis.p_sync,
            h_delta_s=analysis.h_delta_s,
            mepl=analysis.mepl,
            vepl=analysis.vepl,
            mdl=analysis.mdl,
            excess_rate=analysis.excess_rate,
            h_mod_2d1=analysis.h_mod(2 * analysis.d_eta + 1),
            h_lower_bound=lower,
            lost_mass=analysis.lost_mass,
        )
        report.meta["delta_pmf"][code_id] = [
            [e, c] for e, c in analysis.delta_pmf.items() if abs(c) > 1e-30]
        report.meta["prob_strings"][code_id] = list(source.prob_strings)
    return report


ENTROPY_COLUMNS = ["code", "l_s", "ebn0_db", "t", "h_mod_t"]


def run_entropy_convergence(code_id: str, l_s: int, ebn0: float, t_max: int,
                            eta: float = 1e-6) -> Report:
    """Residue entropy versus aggregation modulus, plus the unaggregated
    entropy it converges to."""
    code, source = get_code(code_id)
    analysis = criteria(code, source, l_s, Awgn(ebn0), eta=eta)
    report = Report(columns=ENTROPY_COLUMNS, meta={
        "kind": "entropy_convergence",
        "h_delta_s": analysis.h_delta_s,
        "d_eta": analysis.d_eta,
        "eta": eta,
    })
    for t in range(1, t_max + 1):
        report.add_row(code=code_id, l_s=l_s, ebn0_db=ebn0, t=t,
                       h_mod_t=analysis.h_mod(t))
    return report


COST_COLUMNS = [
    "code", "l_s", "ebn0_db", "t1", "t2", "t3", "trials", "rho", "rho_ci95",
    "rho_star", "d_bal", "d_mtd", "ratio_mtd_bal", "ratio_mtd_direct",
]


def run_cost_comparison(code_id: str, l_s: int, t1: int, t2: int,
                        ebn0_list: tuple[float, ...], trials: int,
                        master_seed: int = 0) -> Report:
    """Measured combined-decoding cost against the direct product-modulus
    cost, per Eb/N0, using branch-operation counts."""
    code, source = get_code(code_id)
    config = CombinedConfig(t1, t2)
    rstar = rho_star(t1, t2)
    report = Report(columns=COST_COLUMNS, meta={
        "kind": "cost_comparison",
        "master_seed": master_seed,
        "rho_star": rstar,
    })
    cfg_bal = TrellisConfig.aggregated(1, l_s)
    points: list[tuple[float, float]] = []
    for ebn0 in ebn0_list:
        channel = Awgn(ebn0)
        disagreements = 0
        ops_mtd = 0
        ops_bal = 0
        for i in range(trials):
            rng = frame_rng(master_seed, i)
            _, bits = sample_frame(code, source, l_s, rng)
            received = channel.transmit(bits, rng)
            _, agreed, ops = combined_decode(code, source, config, l_s,
                                             received, channel)
            disagreements += not agreed
            ops_mtd += ops
            ops_bal += viterbi_decode(code, source, cfg_bal, received,
                                      channel).branch_ops
        rho = disagreements / trials
        d_bal = ops_bal / trials
        d_mtd = ops_mtd / trials
        ratio_direct = d_mtd / (config.t3 * d_bal)
        points.append((ebn0, ratio_direct))
        report.add_row(
            code=code_id, l_s=l_s, ebn0_db=ebn0, t1=t1, t2=t2, t3=config.t3,
            trials=trials, rho=rho,
            rho_ci95=1.96 * math.sqrt(max(rho * (1 - rho), 0.0) / trials),
            rho_star=rstar, d_bal=d_bal, d_mtd=d_mtd,
            ratio_mtd_bal=d_mtd / d_bal,
            ratio_mtd_direct=ratio_direct,
        )
    report.meta["crossing_ebn0"] = _crossing(points)
    return report


def _crossing(points: list[tuple[float, float]]) -> float | None:
    """Linear-interpolated Eb/N0 where the cost ratio crosses 1 (combined
    decoding becomes cheaper than direct product-modulus decoding)."""
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if (y0 - 1.0) * (y1 - 1.0) <= 0.0 and y0 != y1:
            return x0 + (1.0 - y0) * (x1 - x0) / (y1 - y0)
    return None
