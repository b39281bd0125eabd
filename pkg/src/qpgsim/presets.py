"""Default process parameters of the demonstrated 1545 nm -> 550 nm converter."""
from .dispersion import get_material
from .jsa import PDCSpec
from .phasematching import ProcessSpec
from .photonstats import ChannelModel
from .processfinder import Materials

LN_WAVEGUIDE = "lithium-niobate-effective-waveguide"
LT_BULK = "lithium-tantalate-bulk"
KTP = "ktp-bulk"

QPG_LENGTH = 27e-3
QPG_TEMPERATURE = 190.0
QPG_LAMBDA_IN = 1545.0
QPG_LAMBDA_PUMP = 854.0

# KTP length chosen so the K-optimal pump gives a ~963 GHz signal marginal
PDC_LENGTH = 3.88e-3
PDC_TEMPERATURE = 25.0
# 80 nm band-pass around 1550 nm, expressed as a frequency span
PDC_GRID_SPAN = 10e12
PDC_GRID_NUM = 240

MEASURED_INPUT_FWHM = 963e9
MEASURED_INPUT_FWHM_ERR = 11e9
MEASURED_OUTPUT_FWHM = 129e9
MEASURED_OUTPUT_FWHM_ERR = 4e9
MEASURED_G2 = 0.32

# Illustrative Klyshko and detector inputs; they reproduce the reported ratios
# (internal 75.5 %, external 16.9 %) but are not measured values.
KLYSHKO_OPEN = 0.049
KLYSHKO_BLOCKED = 0.20
KLYSHKO_CONVERTED = 0.02535
KLYSHKO_UNCONVERTED = 0.20
DETECTOR_SNSPD = 0.80
DETECTOR_SIAPD = 0.60
FIBER_COUPLING_CONVERTED = 0.5
FIBER_COUPLING_REFERENCE = 0.8
OPTICS_TRANSMISSION = 0.68
WAVEGUIDE_INCOUPLING = 0.71


def ln_materials(material=LN_WAVEGUIDE):
    o, e = get_material(material, "o"), get_material(material, "e")
    return Materials(input=o, pump=e, output=o)


def lt_materials(swap=False):
    o, e = get_material(LT_BULK, "o"), get_material(LT_BULK, "e")
    return Materials(input=e, pump=o, output=o) if swap else Materials(input=o, pump=e, output=o)


def qpg_spec(length=QPG_LENGTH, temperature=QPG_TEMPERATURE, lambda_in=QPG_LAMBDA_IN,
             lambda_pump=QPG_LAMBDA_PUMP, material=LN_WAVEGUIDE, qpm_order=1):
    """Type-II converter: ordinary input, extraordinary pump, ordinary output; period solved."""
    m = ln_materials(material)
    spec = ProcessSpec(m.input, m.pump, m.output, length, temperature, lambda_in, lambda_pump, qpm_order=qpm_order)
    return spec.solved()


def pdc_spec(length=PDC_LENGTH, temperature=PDC_TEMPERATURE, lambda_signal=1545.0, lambda_idler=1545.0):
    """Type-II KTP source: y pump, y signal, z idler; period solved."""
    y, z = get_material(KTP, "y"), get_material(KTP, "z")
    return PDCSpec(y, y, z, length, temperature, lambda_signal, lambda_idler).solved()


def default_channel():
    return ChannelModel(
        herald_transmission=0.25,
        signal_transmission_before=0.25,
        conversion_efficiency=1.0,
        signal_transmission_after=1.0,
    )
