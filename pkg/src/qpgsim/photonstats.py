"""
Heralded photon statistics of a lossy multimode two-mode squeezed vacuum.

The signal arm passes a chain of transmissions (conversion is one of them),
a 50/50 splitter and two threshold detectors; the idler arm is the herald.
Detectors do not resolve spectral modes and loss is mode independent, so
click statistics depend only on the total pair number.

Two engines produce the same eight-outcome click distribution over
(herald, output 1, output 2):

* ``fock_exact`` enumerates the truncated pair-number distribution and the
  binomial loss/splitting tree;
* ``monte_carlo`` samples the same chain in fixed-size chunks, each with its
  own seed derived from (seed, chunk index), so results do not depend on the
  number of worker threads.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.stats import binom

from .efficiency import CountStatistics
from .errors import MonteCarloUnderflow, TruncationInsufficient

TAIL_LIMIT = 1e-8
CHUNK = 1 << 16
MIN_CONDITIONED = 100


@dataclass(frozen=True)
class SourceModel:
    mean_photon_pairs: float
    schmidt_modes: int = 1
    truncation: int = 10

    def __post_init__(self):
        if self.mean_photon_pairs < 0:
            raise ValueError("mean_photon_pairs must be non-negative")
        if self.schmidt_modes < 1:
            raise ValueError("schmidt_modes must be a positive integer")
        if self.truncation < 1:
            raise ValueError("truncation must be positive")
        tail = self.tail_probability()
        if tail >= TAIL_LIMIT:
            raise TruncationInsufficient(
                f"truncation {self.truncation} leaves tail probability {tail:.3g} >= {TAIL_LIMIT:g}"
            )

    @property
    def mode_mean(self):
        return self.mean_photon_pairs / self.schmidt_modes

    def tail_probability(self):
        """Probability that some mode exceeds the truncation."""
        x = self.mode_mean / (1 + self.mode_mean)
        per_mode = x ** (self.truncation + 1)
        return -np.expm1(self.schmidt_modes * np.log1p(-per_mode)) if per_mode < 1 else 1.0

    def pair_distribution(self):
        """Distribution of the total pair number, truncated per mode and renormalized."""
        mu = self.mode_mean
        k = np.arange(self.truncation + 1)
        single = (mu / (1 + mu)) ** k / (1 + mu) if mu > 0 else (k == 0).astype(float)
        dist = single
        for _ in range(self.schmidt_modes - 1):
            dist = np.convolve(dist, single)
        return dist / dist.sum()


def minimal_truncation(mean_photon_pairs, schmidt_modes=1):
    t = 1
    mu = mean_photon_pairs / schmidt_modes
    x = mu / (1 + mu)
    while x > 0 and -np.expm1(schmidt_modes * np.log1p(-x ** (t + 1))) >= TAIL_LIMIT:
        t += 1
    return t


@dataclass(frozen=True)
class ChannelModel:
    herald_transmission: float = 1.0
    signal_transmission_before: float = 1.0
    conversion_efficiency: float = 1.0
    signal_transmission_after: float = 1.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not 0 <= v <= 1:
                raise ValueError(f"{f.name}={v!r} is not in [0, 1]")

    @property
    def signal_transmission(self):
        return self.signal_transmission_before * self.conversion_efficiency * self.signal_transmission_after

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ClickOutcomes:
    """Distribution over outcomes indexed ``4*herald + 2*out1 + out2``.

    ``trials == 0`` marks an exact distribution; otherwise ``counts`` holds
    the raw integer tallies.
    """

    probabilities: np.ndarray
    trials: int = 0
    counts: np.ndarray = None

    def p(self, herald=None, out1=None, out2=None):
        total = 0.0
        for idx in range(8):
            h, a, b = idx >> 2 & 1, idx >> 1 & 1, idx & 1
            if (herald is None or h == herald) and (out1 is None or a == out1) and (out2 is None or b == out2):
                total += self.probabilities[idx]
        return float(total)

    def statistics(self):
        P_h = self.p(herald=1)
        P_1 = self.p(herald=1, out1=1)
        P_2 = self.p(herald=1, out2=1)
        P_12 = self.p(herald=1, out1=1, out2=1)
        return CountStatistics(self.trials, P_h, P_1 + P_2 - P_12, P_1, P_2, P_12)


def fock_outcomes(source, channel):
    """Exact eight-outcome click distribution."""
    pn = source.pair_distribution()
    nmax = pn.size - 1
    n = np.arange(nmax + 1)
    t = channel.signal_transmission
    herald_dark = (1 - channel.herald_transmission) ** n  # P(no herald click | n)
    m = np.arange(nmax + 1)
    transmit = binom.pmf(m[None, :], n[:, None], t)  # [n, m]
    # split m photons: m1 ~ Bin(m, 1/2); outputs click iff m1 > 0 and m - m1 > 0
    split = binom.pmf(m[None, :], m[:, None], 0.5)  # [m, m1]
    m1 = m[None, :]
    a1 = m1 > 0
    a2 = (m[:, None] - m1) > 0
    valid = m1 <= m[:, None]
    arm = np.zeros((nmax + 1, 2, 2))
    for i in (0, 1):
        for j in (0, 1):
            mask = valid & (a1 == bool(i)) & (a2 == bool(j))
            arm[:, i, j] = (split * mask).sum(axis=1)
    signal = transmit @ arm.reshape(nmax + 1, 4)  # [n, 4] over (out1, out2)
    probs = np.zeros(8)
    for h in (0, 1):
        w = pn * (herald_dark if h == 0 else 1 - herald_dark)
        probs[4 * h : 4 * h + 4] = w @ signal
    return ClickOutcomes(probs)


def _mc_chunk(args):
    source, channel, seed, index, size = args
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    mu = source.mode_mean
    if mu > 0:
        pairs = rng.negative_binomial(source.schmidt_modes, 1.0 / (1.0 + mu), size=size)
    else:
        pairs = np.zeros(size, dtype=np.int64)
    herald = rng.binomial(pairs, channel.herald_transmission) > 0
    sig = rng.binomial(pairs, channel.signal_transmission)
    m1 = rng.binomial(sig, 0.5)
    idx = 4 * herald + 2 * (m1 > 0) + ((sig - m1) > 0)
    return np.bincount(idx, minlength=8)


def monte_carlo_outcomes(source, channel, trials, seed=0, workers=1):
    """Sampled click tallies; bit-identical for any ``workers``."""
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be positive")
    sizes = [CHUNK] * (trials // CHUNK)
    if trials % CHUNK:
        sizes.append(trials % CHUNK)
    jobs = [(source, channel, seed, i, s) for i, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_mc_chunk, jobs))
    else:
        parts = [_mc_chunk(j) for j in jobs]
    counts = np.sum(parts, axis=0)
    return ClickOutcomes(counts / trials, trials=trials, counts=counts)


def click_outcomes(source, channel, method="fock_exact", trials=1_000_000, seed=0, workers=1):
    if method == "fock_exact":
        return fock_outcomes(source, channel)
    if method == "monte_carlo":
        return monte_carlo_outcomes(source, channel, trials, seed, workers)
    raise ValueError(f"unknown method {method!r}")


def click_probabilities(source, channel, method="fock_exact", **kw):
    """Full herald-gated click record as CountStatistics."""
    return click_outcomes(source, channel, method, **kw).statistics()


@dataclass(frozen=True)
class G2Result:
    value: float
    stderr: float
    method: str
    conditioning: str


def _g2_from_counts(n, a, b, c):
    """g2 = n c / (a b) and its delta-method standard error (multinomial counts)."""
    if min(a, b) == 0:
        return np.nan, np.nan
    g = n * c / (a * b)
    if c == 0:
        return 0.0, np.nan
    p1, p2, pc = a / n, b / n, c / n
    cov = np.array(
        [
            [p1 * (1 - p1), pc - p1 * p2, pc - p1 * pc],
            [pc - p1 * p2, p2 * (1 - p2), pc - p2 * pc],
            [pc - p1 * pc, pc - p2 * pc, pc * (1 - pc)],
        ]
    ) / n
    grad = np.array([-1 / p1, -1 / p2, 1 / pc])
    return g, float(g * np.sqrt(grad @ cov @ grad))


def g2_from_outcomes(outcomes, conditioning="herald"):
    """g2 = P_12 / (P_1 P_2), conditioned on a herald click or unconditioned."""
    if conditioning == "herald":
        sel = dict(herald=1)
    elif conditioning == "none":
        sel = {}
    else:
        raise ValueError(f"unknown conditioning {conditioning!r}")
    n = outcomes.p(**sel)
    a = outcomes.p(out1=1, **sel)
    b = outcomes.p(out2=1, **sel)
    c = outcomes.p(out1=1, out2=1, **sel)
    if outcomes.trials == 0:
        if n == 0 or a == 0 or b == 0:
            return np.nan, 0.0
        return n * c / (a * b), 0.0
    counts = outcomes.trials * np.array([n, a, b, c])
    if counts[0] < MIN_CONDITIONED:
        raise MonteCarloUnderflow(f"only {int(round(counts[0]))} conditioning events (< {MIN_CONDITIONED})")
    return _g2_from_counts(*np.rint(counts))


def heralded_g2(source, channel, method="fock_exact", trials=1_000_000, seed=0, workers=1, conditioning="herald"):
    """Second-order correlation behind the 50/50 splitter.

    ``conditioning="herald"`` evaluates P_12 / (P_1 P_2) on herald-click
    events only; ``"none"`` ignores the herald (unheralded signal arm).
    """
    out = click_outcomes(source, channel, method, trials=trials, seed=seed, workers=workers)
    g, se = g2_from_outcomes(out, conditioning)
    return G2Result(float(g), float(se), method, conditioning)


@dataclass(frozen=True)
class InvarianceReport:
    efficiencies: tuple
    g2: tuple
    stderr: tuple

    @property
    def spread(self):
        return float(np.max(self.g2) - np.min(self.g2))


def g2_conversion_invariance(source, channel, conversion_etas, method="fock_exact", **kw):
    """Heralded g2 as the conversion efficiency is varied."""
    etas = tuple(float(e) for e in conversion_etas)
    if any(not 0 < e <= 1 for e in etas):
        raise ValueError("conversion efficiencies must lie in (0, 1]")
    res = [heralded_g2(source, channel.replace(conversion_efficiency=e), method, **kw) for e in etas]
    return InvarianceReport(etas, tuple(r.value for r in res), tuple(r.stderr for r in res))


def fit_mean_pairs(target_g2, channel, schmidt_modes=1, bracket=(1e-6, 2.0)):
    """Mean pair number whose exact heralded g2 equals ``target_g2``."""

    def f(mu):
        src = SourceModel(mu, schmidt_modes, minimal_truncation(mu, schmidt_modes))
        return heralded_g2(src, channel).value - target_g2

    return brentq(f, *bracket, xtol=1e-14, rtol=1e-12)


def depletion_runs(source, channel, internal_eta, method="fock_exact", **kw):
    """Click records of the unconverted light with the converter pump open and blocked.

    With the pump open a fraction ``internal_eta`` of the signal is converted
    away, so the unconverted arm sees transmission ``1 - internal_eta``;
    with it blocked the converter is transparent.
    """
    opened = channel.replace(conversion_efficiency=1.0 - internal_eta)
    blocked = channel.replace(conversion_efficiency=1.0)
    kw_blocked = dict(kw)
    if "seed" in kw_blocked:
        kw_blocked["seed"] = kw_blocked["seed"] + 1
    return (
        click_probabilities(source, opened, method, **kw),
        click_probabilities(source, blocked, method, **kw_blocked),
    )
