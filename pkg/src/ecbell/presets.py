"""Published parameter sets, as printed."""
from __future__ import annotations

from .correlators import BellSettings, MerminSettings
from .states import BipartiteState, TripartiteState
from .weyl import ComplexAmplitude as C

BELL_AMPLITUDES = {
    "z": C(0.01, 0.12211),
    "z_prime": C(0.01, -0.67795),
    "w": C(0.001, 0.122),
    "w_prime": C(0.01, -0.67826),
}
# no state parameters are published for the CHSH set; this is the argmax of
# the default 240x240 scan over [0.05, 60]^2
BELL_STATE = {"eta": 0.05, "sigma": 0.05}
BELL_SCAN = {"eta": (0.05, 60.0, 240), "sigma": (0.05, 60.0, 240)}

MERMIN_AMPLITUDES = {
    "z": C(0.020091, -0.00055757),
    "z_prime": C(0.040244, -0.00114505),
    "w": C(0.015207, -0.0000692535),
    "w_prime": C(0.036766, -0.00036440),
    "zeta": C(0.0247087, -0.00050390),
    "zeta_prime": C(0.0437431, -0.00087464),
}
MERMIN_STATE = {"eta": 38.8525, "sigma": 36.5831, "tau": 41.2201}
# step 0.2 grids placed so that (38.8525, 36.5831) are nodes
MERMIN_SCAN = {"eta": (0.0525, 60.0525, 301), "sigma": (0.1831, 59.9831, 300)}

MERMIN_HEADLINE = 3.99383
BELL_HEADLINE = 2.23


def bell_paper() -> BellSettings:
    return BellSettings(**BELL_AMPLITUDES, state=BipartiteState(**BELL_STATE))


def mermin_paper() -> MerminSettings:
    return MerminSettings(**MERMIN_AMPLITUDES, state=TripartiteState(**MERMIN_STATE))


PRESETS = {"bell-paper": "bell", "mermin-paper": "mermin"}
