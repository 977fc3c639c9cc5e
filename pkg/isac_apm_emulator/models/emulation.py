"""
Compiled hardware settings - APM weight matrices and RTS unit CIR sequences.

The APM (amplitude-and-phase modulation) network links the K Type-A ports
facing the base station to 2N Type-B ports facing the RTS units. Group n
consists of a Tx-side port Bn_T and an Rx-side port Bn_R wired to RTS unit n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from numpy.typing import NDArray

from ..core.constants import SensingMode
from ..core.errors import InvalidArgumentError
from .scenario import QuantizationSettings

# Relative slack on the Doppler bound for values computed as 1/(2 dt)
_DOPPLER_BOUND_RTOL = 1e-9


def _complex_matrix_to_dict(m: NDArray[np.complex128]) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _complex_matrix_from_dict(data: dict) -> NDArray[np.complex128]:
    re = np.asarray(data["re"], dtype=np.float64)
    im = np.asarray(data["im"], dtype=np.float64)
    return re + 1j * im


@dataclass(frozen=True, eq=False)
class ApmConfig:
    """
    Weights loaded into the APM network for one snapshot.

    Attributes:
        mode: ADTR or SATR
        weights_tx: K x N complex, Type-A port k -> Bn_T
        weights_rx: K x N complex, Bn_R -> Type-A port k
        tx_mask: Type-A ports linked on the Tx side
        rx_mask: Type-A ports linked on the Rx side
        quantization: Settings applied to the weights (None = exact)
    """
    mode: SensingMode
    weights_tx: NDArray[np.complex128] = field(repr=False)
    weights_rx: NDArray[np.complex128] = field(repr=False)
    tx_mask: NDArray[np.bool_] = field(repr=False)
    rx_mask: NDArray[np.bool_] = field(repr=False)
    quantization: Optional[QuantizationSettings] = None

    def __post_init__(self) -> None:
        if self.weights_tx.shape != self.weights_rx.shape or self.weights_tx.ndim != 2:
            raise InvalidArgumentError(
                f"Tx/Rx weight matrices must share a K x N shape, got "
                f"{self.weights_tx.shape} and {self.weights_rx.shape}"
            )
        k = self.weights_tx.shape[0]
        if self.tx_mask.shape != (k,) or self.rx_mask.shape != (k,):
            raise InvalidArgumentError("port masks must have one entry per Type-A port")
        if not (np.all(np.isfinite(self.weights_tx)) and np.all(np.isfinite(self.weights_rx))):
            raise InvalidArgumentError("APM weights must be finite")
        for arr in (self.weights_tx, self.weights_rx, self.tx_mask, self.rx_mask):
            arr.setflags(write=False)

    @property
    def type_a_count(self) -> int:
        """Number of Type-A ports K."""
        return int(self.weights_tx.shape[0])

    @property
    def target_count(self) -> int:
        """Number of emulated targets N."""
        return int(self.weights_tx.shape[1])

    @property
    def type_b_groups(self) -> list[tuple[int, int]]:
        """(Bn_T, Bn_R) Type-B port indices per group."""
        return [(2 * n, 2 * n + 1) for n in range(self.target_count)]

    @property
    def is_quantized(self) -> bool:
        """True when the weights were snapped to a hardware lattice."""
        return self.quantization is not None and not self.quantization.ideal

    def structural_zeros_hold(self) -> bool:
        """True when no weight is loaded outside the Tx/Rx masks."""
        return bool(
            np.all(self.weights_tx[~self.tx_mask] == 0)
            and np.all(self.weights_rx[~self.rx_mask] == 0)
        )

    def active_links(self) -> int:
        """Number of APM channels carrying a non-zero weight."""
        return int(np.count_nonzero(self.weights_tx) + np.count_nonzero(self.weights_rx))

    def resource_summary(self) -> dict:
        """
        Hardware resources consumed by this configuration.

        RTS units scale with the number of targets, not with the number
        of base-station antenna ports.
        """
        return {
            "mode": self.mode.value,
            "type_a_ports": int(np.count_nonzero(self.tx_mask | self.rx_mask)),
            "type_b_ports": 2 * self.target_count,
            "active_links": self.active_links(),
            "rts_units": self.target_count,
        }

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "mode": self.mode.value,
            "type_a_count": self.type_a_count,
            "type_b_groups": [list(g) for g in self.type_b_groups],
            "tx_mask": self.tx_mask.tolist(),
            "rx_mask": self.rx_mask.tolist(),
            "quantization": None if self.quantization is None else self.quantization.to_dict(),
            "weights_tx": _complex_matrix_to_dict(np.asarray(self.weights_tx)),
            "weights_rx": _complex_matrix_to_dict(np.asarray(self.weights_rx)),
            "resources": self.resource_summary(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ApmConfig:
        """Deserialize from dictionary."""
        quant = data.get("quantization")
        return cls(
            mode=SensingMode(data["mode"]),
            weights_tx=_complex_matrix_from_dict(data["weights_tx"]),
            weights_rx=_complex_matrix_from_dict(data["weights_rx"]),
            tx_mask=np.asarray(data["tx_mask"], dtype=bool),
            rx_mask=np.asarray(data["rx_mask"], dtype=bool),
            quantization=None if quant is None else QuantizationSettings.from_dict(quant),
        )


@dataclass(frozen=True)
class CirRecord:
    """One CIR sample loaded into an RTS unit."""
    delay_s: float
    complex_gain: complex
    doppler_hz: float

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "delay_s": self.delay_s,
            "gain_re": self.complex_gain.real,
            "gain_im": self.complex_gain.imag,
            "doppler_hz": self.doppler_hz,
        }

    @classmethod
    def from_dict(cls, data: dict) -> CirRecord:
        """Deserialize from dictionary."""
        return cls(
            delay_s=float(data["delay_s"]),
            complex_gain=complex(float(data["gain_re"]), float(data["gain_im"])),
            doppler_hz=float(data["doppler_hz"]),
        )


@dataclass(frozen=True)
class RtsUnitConfig:
    """
    Settings of one radar target simulator unit.

    Attributes:
        index: Unit number n (wired to Type-B group n)
        records: N_t CIR samples stepped at ``update_interval_s``
        update_interval_s: CIR update interval dt
    """
    index: int
    records: tuple[CirRecord, ...]
    update_interval_s: float

    def __post_init__(self) -> None:
        if not self.records:
            raise InvalidArgumentError(f"RTS unit {self.index} needs at least one CIR record")
        if not (math.isfinite(self.update_interval_s) and self.update_interval_s > 0):
            raise InvalidArgumentError(
                f"update interval must be > 0, got {self.update_interval_s}"
            )
        bound = 0.5 / self.update_interval_s * (1.0 + _DOPPLER_BOUND_RTOL)
        for i, rec in enumerate(self.records):
            if rec.delay_s < 0:
                raise InvalidArgumentError(f"RTS unit {self.index} record {i}: negative delay")
            if abs(rec.doppler_hz) > bound:
                raise InvalidArgumentError(
                    f"RTS unit {self.index} record {i}: Doppler {rec.doppler_hz:g} Hz exceeds "
                    f"the unambiguous limit {0.5 / self.update_interval_s:g} Hz"
                )

    @property
    def n_time(self) -> int:
        """Number of CIR samples N_t."""
        return len(self.records)

    @property
    def times_s(self) -> NDArray[np.float64]:
        """Stepped CIR times t_i = i dt."""
        return np.arange(self.n_time, dtype=np.float64) * self.update_interval_s

    @property
    def delays_s(self) -> NDArray[np.float64]:
        """Delay per CIR sample."""
        return np.array([r.delay_s for r in self.records])

    @property
    def gains(self) -> NDArray[np.complex128]:
        """Complex gain per CIR sample."""
        return np.array([r.complex_gain for r in self.records], dtype=np.complex128)

    @property
    def dopplers_hz(self) -> NDArray[np.float64]:
        """Doppler shift per CIR sample."""
        return np.array([r.doppler_hz for r in self.records])

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "unit": self.index,
            "update_interval_s": self.update_interval_s,
            "cir": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RtsUnitConfig:
        """Deserialize from dictionary."""
        return cls(
            index=int(data["unit"]),
            update_interval_s=float(data["update_interval_s"]),
            records=tuple(CirRecord.from_dict(r) for r in data["cir"]),
        )
