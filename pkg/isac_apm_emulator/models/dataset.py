"""
CFR dataset model - the complex channel-frequency-response tensor a
base station records against the emulator, with its axes and metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..core.constants import DATASET_AXES, SensingMode
from ..core.errors import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class CfrDataset:
    """
    A recorded CFR tensor.

    Axis order:
        ADTR: (time, frequency, port)
        SATR: (time, rx_port, tx_port, frequency)

    Attributes:
        mode: ADTR or SATR
        time_s: CIR sample times (N_t,)
        frequency_hz: Absolute sweep frequencies carrier + f' (N_f,)
        port_indices: Element index per port axis, in axis order
        samples: Complex tensor in the declared axis order
        carrier_hz: Sweep center frequency
        metadata: Echo of the generating scenario snapshot
    """
    mode: SensingMode
    time_s: NDArray[np.float64] = field(repr=False)
    frequency_hz: NDArray[np.float64] = field(repr=False)
    port_indices: tuple[NDArray[np.float64], ...] = field(repr=False)
    samples: NDArray[np.complex128] = field(repr=False)
    carrier_hz: float = 0.0
    metadata: dict[str, Any] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        names = DATASET_AXES[self.mode]
        if len(self.port_indices) != len(names) - 2:
            raise InvalidArgumentError(
                f"{self.mode.value} datasets need {len(names) - 2} port axes, "
                f"got {len(self.port_indices)}"
            )
        expected = tuple(len(g) for g in self.axis_grids())
        if self.samples.shape != expected:
            raise InvalidArgumentError(
                f"sample tensor shape {self.samples.shape} does not match axes {expected}"
            )

    # =========================================================================
    # Axes
    # =========================================================================

    @property
    def axis_names(self) -> tuple[str, ...]:
        """Axis names in storage order."""
        return DATASET_AXES[self.mode]

    def axis_grids(self) -> list[NDArray[np.float64]]:
        """Axis grids in storage order."""
        if self.mode is SensingMode.ADTR:
            return [self.time_s, self.frequency_hz, self.port_indices[0]]
        return [self.time_s, self.port_indices[0], self.port_indices[1], self.frequency_hz]

    @property
    def n_time(self) -> int:
        """Number of CIR samples N_t."""
        return len(self.time_s)

    @property
    def n_freq(self) -> int:
        """Number of frequency points N_f."""
        return len(self.frequency_hz)

    @property
    def port_count(self) -> int:
        """Number of monostatic ports (ADTR) or Rx x Tx pairs (SATR)."""
        return int(np.prod([len(p) for p in self.port_indices]))

    @property
    def baseband_hz(self) -> NDArray[np.float64]:
        """Frequency offsets f' relative to the carrier."""
        return self.frequency_hz - self.carrier_hz

    @property
    def freq_step_hz(self) -> float:
        """Frequency step (inf for a single-point sweep)."""
        if self.n_freq < 2:
            return float("inf")
        return float(self.frequency_hz[1] - self.frequency_hz[0])

    @property
    def update_interval_s(self) -> float:
        """CIR update interval dt (from metadata when N_t = 1)."""
        if self.n_time >= 2:
            return float(self.time_s[1] - self.time_s[0])
        return float(self.metadata.get("update_interval_s", 0.0))

    @property
    def label(self) -> str:
        """Snapshot label from the metadata."""
        return str(self.metadata.get("label", ""))

    @property
    def nbytes(self) -> int:
        """Size of the sample tensor in bytes."""
        return int(self.samples.nbytes)

    def __repr__(self) -> str:
        shape = "x".join(str(n) for n in self.samples.shape)
        return f"CfrDataset({self.mode.value}, {shape}, label={self.label!r})"
