"""
End-to-end report chain: pair source, converter, widths, efficiencies and
heralded g2, collected into one ordered summary.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import presets
from .efficiency import (
    coupling_corrected,
    external_efficiency,
    filter_baselines,
    internal_efficiency,
    klyshko,
)
from .fwhm import spectrum_fwhm
from .jsa import (
    PumpEnvelope,
    compression_factor,
    conversion_jta,
    convert_spectrum,
    default_conversion_grids,
    default_pdc_grids,
    gaussian_amplitude,
    marginal_fwhm,
    pdc_jsa,
    schmidt,
    tune_pump_for_decorrelation,
)
from .phasematching import phasematching_output_fwhm
from .photonstats import (
    ChannelModel,
    SourceModel,
    click_probabilities,
    fit_mean_pairs,
    heralded_g2,
    minimal_truncation,
)


@dataclass(frozen=True)
class ReportConfig:
    # converter
    length: float = presets.QPG_LENGTH
    temperature: float = presets.QPG_TEMPERATURE
    lambda_in: float = presets.QPG_LAMBDA_IN
    lambda_pump: float = presets.QPG_LAMBDA_PUMP
    material: str = presets.LN_WAVEGUIDE
    # source
    pdc_length: float = presets.PDC_LENGTH
    pdc_temperature: float = presets.PDC_TEMPERATURE
    pdc_grid_span: float = presets.PDC_GRID_SPAN
    pdc_grid_num: int = presets.PDC_GRID_NUM
    target_schmidt: float = 1.25
    # measured widths (Hz)
    measured_input_fwhm: float = presets.MEASURED_INPUT_FWHM
    measured_output_fwhm: float = presets.MEASURED_OUTPUT_FWHM
    # Klyshko record and detection
    klyshko_open: float = presets.KLYSHKO_OPEN
    klyshko_blocked: float = presets.KLYSHKO_BLOCKED
    klyshko_converted: float = presets.KLYSHKO_CONVERTED
    klyshko_unconverted: float = presets.KLYSHKO_UNCONVERTED
    detector_converted: float = presets.DETECTOR_SIAPD
    detector_reference: float = presets.DETECTOR_SNSPD
    coupling_converted: float = presets.FIBER_COUPLING_CONVERTED
    coupling_reference: float = presets.FIBER_COUPLING_REFERENCE
    # photon statistics
    target_g2: float = presets.MEASURED_G2
    herald_transmission: float = 0.25
    signal_transmission: float = 0.25
    schmidt_modes: int = 1
    trials: int = 1_000_000
    seed: int = 0
    workers: int = 1
    # output grid of the converter
    out_span: float = 0.6e12
    out_num: int = 241
    in_span: float = 6e12
    in_num: int = 241
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d.pop("extra")
        return d


def source_stage(cfg):
    spec = presets.pdc_spec(cfg.pdc_length, cfg.pdc_temperature)
    grids = default_pdc_grids(spec, span=cfg.pdc_grid_span, num=cfg.pdc_grid_num)
    pump, K = tune_pump_for_decorrelation(spec, cfg.target_schmidt, grids=grids)
    jsi = pdc_jsa(spec, pump, *grids)
    width = marginal_fwhm(jsi, axis=0)
    return {"spec": spec, "pump": pump, "schmidt_number": K, "jsa": jsi, "signal_fwhm": width}


def converter_stage(cfg, input_fwhm):
    """Converted spectrum of a Gaussian input whose FWHM matches the converter pump."""
    spec = presets.qpg_spec(cfg.length, cfg.temperature, cfg.lambda_in, cfg.lambda_pump, cfg.material)
    pump = PumpEnvelope(centre=spec.lambda_pump, fwhm=input_fwhm)
    gin, gout = default_conversion_grids(spec, cfg.in_span, cfg.out_span, cfg.in_num, cfg.out_num)
    jta = conversion_jta(spec, pump, gin, gout)
    f_in0 = float(gin.values[(gin.num - 1) // 2]) if gin.num % 2 else float(np.mean(gin.values))
    a_in = gaussian_amplitude(gin.frequencies, f_in0, input_fwhm)
    out = np.abs(convert_spectrum(jta, a_in)) ** 2
    width = spectrum_fwhm(gout.frequencies, out)
    return {
        "spec": spec,
        "jta": jta,
        "output_frequency": gout.frequencies,
        "output_intensity": out,
        "output_fwhm": width,
        "phasematching_fwhm": phasematching_output_fwhm(spec),
        "jta_schmidt_number": schmidt(jta).schmidt_number,
    }


def efficiency_stage(cfg):
    eta_int = internal_efficiency(cfg.klyshko_open, cfg.klyshko_blocked)
    eta_ext = external_efficiency(
        cfg.klyshko_converted, cfg.klyshko_unconverted, cfg.detector_converted, cfg.detector_reference
    )
    return {
        "internal": eta_int.value,
        "external": eta_ext,
        "corrected": coupling_corrected(eta_ext, cfg.coupling_converted, cfg.coupling_reference),
    }


def g2_stage(cfg, internal_eta):
    channel = ChannelModel(
        herald_transmission=cfg.herald_transmission,
        signal_transmission_before=cfg.signal_transmission,
    )
    mu = fit_mean_pairs(cfg.target_g2, channel, cfg.schmidt_modes)
    source = SourceModel(mu, cfg.schmidt_modes, minimal_truncation(mu, cfg.schmidt_modes))
    after = channel.replace(conversion_efficiency=internal_eta)
    res = {"mean_pairs": mu}
    for tag, ch in (("before", channel), ("after", after)):
        res[f"g2_{tag}"] = heralded_g2(source, ch).value
        mc = heralded_g2(source, ch, "monte_carlo", trials=cfg.trials, seed=cfg.seed, workers=cfg.workers)
        res[f"g2_{tag}_mc"] = mc.value
        res[f"g2_{tag}_mc_stderr"] = mc.stderr
    return res


def run_report(cfg=None):
    """Full chain; returns ``(summary, stages)`` with ``summary`` an ordered dict of floats."""
    cfg = cfg or ReportConfig()
    src = source_stage(cfg)
    in_fwhm = src["signal_fwhm"].value
    conv = converter_stage(cfg, in_fwhm)
    out_fwhm = conv["output_fwhm"].value
    eff = efficiency_stage(cfg)
    base = filter_baselines(cfg.measured_input_fwhm, cfg.measured_output_fwhm)
    g2 = g2_stage(cfg, eff["internal"])

    summary = {
        "pdc_schmidt_number": src["schmidt_number"],
        "pdc_pump_fwhm_hz": src["pump"].fwhm,
        "input_fwhm_hz": in_fwhm,
        "output_fwhm_hz": out_fwhm,
        "phasematching_output_fwhm_hz": conv["phasematching_fwhm"],
        "compression_factor_simulated": compression_factor(in_fwhm, out_fwhm),
        "measured_input_fwhm_hz": cfg.measured_input_fwhm,
        "measured_output_fwhm_hz": cfg.measured_output_fwhm,
        "compression_factor_measured": compression_factor(cfg.measured_input_fwhm, cfg.measured_output_fwhm),
        "filter_baseline": base["ratio"],
        "filter_baseline_gaussian": base["gaussian"],
        "poling_period_m": conv["spec"].poling_period,
        "lambda_out_nm": conv["spec"].lambda_out,
        "internal_efficiency": eff["internal"],
        "external_efficiency": eff["external"],
        "corrected_efficiency": eff["corrected"],
        "mean_pairs": g2["mean_pairs"],
        "g2_before": g2["g2_before"],
        "g2_after": g2["g2_after"],
        "g2_before_mc": g2["g2_before_mc"],
        "g2_before_mc_stderr": g2["g2_before_mc_stderr"],
        "g2_after_mc": g2["g2_after_mc"],
        "g2_after_mc_stderr": g2["g2_after_mc_stderr"],
    }
    summary = {k: float(v) for k, v in summary.items()}
    return summary, {"source": src, "converter": conv, "efficiency": eff, "g2": g2}


def klyshko_from_model(source, channel, **kw):
    """Klyshko transmission estimate from a simulated click record."""
    return klyshko(click_probabilities(source, channel, **kw))
