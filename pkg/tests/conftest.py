import pytest

from cvmdi.channel_plan import ChannelPlan, build_configuration
from cvmdi.noise import DetectionParams, DwdmParams, FiberSpec, FwmParams
from cvmdi.raman import flat_table


@pytest.fixture
def fiber():
    return FiberSpec({"C": 0.18, "O": 0.34})


@pytest.fixture
def fwm_params():
    return FwmParams(nonlinear_coefficient=1.3, dispersion=17.0, dispersion_slope=0.056)


@pytest.fixture
def dwdm():
    return DwdmParams(receiver_sensitivity=-32.0, insertion_loss_system=8.0,
                      isolation=30.0, filter_bandwidth=15e9)


@pytest.fixture
def detection():
    return DetectionParams(detection_window=1e-9, detector_efficiency=0.6,
                           insertion_loss_detection=2.0)


@pytest.fixture
def config1():
    return build_configuration(1)


@pytest.fixture
def flat_rho():
    """rho = 1e-9 /(nm km) for every tabulated quantum wavelength we use."""
    return flat_table(1e-9, [1310.0, 1536.61, 1537.40, 1550.0])


def plan_from_thz(thz, quantum_nm=1536.61, power=-24.0):
    return ChannelPlan(quantum_nm, tuple(f * 1e12 for f in thz), power)
