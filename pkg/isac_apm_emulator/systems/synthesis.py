"""
Forward synthesis engine.

Produces the CFR tensors a base station records while the emulator replays
the compiled configuration. Every target contributes a time-frequency term

    T_n[i, j] = G_n * exp(j 2pi nu_n t_i) * exp(j 2pi f'_j tau_n)

weighted by its spatial signature. ADTR records one port at a time through
a switch (Tx and Rx weight on the same port); SATR records every Rx x Tx
pair of the split array.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional

import numpy as np
from numpy.typing import NDArray

from ..core.constants import Events, SensingMode
from ..core.errors import InvalidArgumentError, ModeMismatchError
from ..core.event_bus import event_bus
from ..models.dataset import CfrDataset
from ..models.emulation import ApmConfig, RtsUnitConfig
from ..models.scenario import NoiseSettings, SweepSettings
from ..utils.logger import get_logger

logger = get_logger(__name__)

# Ports handled per work item. Fixed so results do not depend on worker count.
PORT_CHUNK = 4


def baseband_grid(sweep: SweepSettings) -> NDArray[np.float64]:
    """Frequency offsets f' spanning [-B/2, +B/2] with N_f points."""
    if sweep.n_freq == 1:
        return np.zeros(1)
    return np.linspace(-sweep.bandwidth_hz / 2.0, sweep.bandwidth_hz / 2.0, sweep.n_freq)


def _check_units(apm: ApmConfig, units: list[RtsUnitConfig]) -> tuple[int, float]:
    """Common N_t and dt of the RTS units."""
    if len(units) != apm.target_count:
        raise InvalidArgumentError(
            f"APM has {apm.target_count} target column(s) but {len(units)} RTS unit(s) were given"
        )
    if not units:
        raise InvalidArgumentError("synthesis needs at least one RTS unit")
    n_time = units[0].n_time
    dt = units[0].update_interval_s
    for u in units[1:]:
        if u.n_time != n_time or u.update_interval_s != dt:
            raise InvalidArgumentError("all RTS units must share N_t and the update interval")
    return n_time, dt


def target_terms(
    units: list[RtsUnitConfig],
    times_s: NDArray[np.float64],
    baseband_hz: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """
    Time-frequency responses of every RTS unit.

    Returns:
        Array of shape (N, N_t, N_f)
    """
    terms = np.empty((len(units), len(times_s), len(baseband_hz)), dtype=np.complex128)
    for n, unit in enumerate(units):
        gain = unit.gains[:, None]
        doppler = np.exp(2j * np.pi * unit.dopplers_hz * times_s)[:, None]
        delay = np.exp(2j * np.pi * unit.delays_s[:, None] * baseband_hz[None, :])
        terms[n] = gain * doppler * delay
    return terms


def add_noise(samples: NDArray[np.complex128], noise: NoiseSettings) -> NDArray[np.complex128]:
    """
    Add complex white Gaussian noise in place.

    The SNR is referenced to a 0 dB (unit-amplitude) target, so the noise
    variance per sample is 10^(-snr/10).
    """
    if not noise.enabled:
        return samples
    rng = np.random.default_rng(noise.seed)
    sigma = np.sqrt(10.0 ** (-noise.snr_db / 10.0) / 2.0)  # type: ignore[operator]
    samples += sigma * (rng.standard_normal(samples.shape) + 1j * rng.standard_normal(samples.shape))
    return samples


def _default_workers() -> int:
    return min(8, os.cpu_count() or 1)


def _run_port_chunks(
    count: int,
    fill: Any,
    label: str,
    workers: Optional[int],
) -> None:
    """Run ``fill(start, stop)`` over disjoint port chunks on a thread pool."""
    chunks = [(k, min(k + PORT_CHUNK, count)) for k in range(0, count, PORT_CHUNK)]
    total = len(chunks)
    workers = workers or _default_workers()

    def work(bounds: tuple[int, int]) -> None:
        fill(*bounds)

    done = 0
    if workers == 1 or total == 1:
        for bounds in chunks:
            work(bounds)
            done += 1
            event_bus.publish(Events.SYNTHESIS_PROGRESS, label=label, done=done, total=total)
        return

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for _ in pool.map(work, chunks):
            done += 1
            event_bus.publish(Events.SYNTHESIS_PROGRESS, label=label, done=done, total=total)


def _metadata(base: Optional[dict], units: list[RtsUnitConfig], sweep: SweepSettings) -> dict:
    meta = dict(base or {})
    meta.setdefault("carrier_hz", sweep.carrier_hz)
    meta.setdefault("bandwidth_hz", sweep.bandwidth_hz)
    meta["update_interval_s"] = units[0].update_interval_s
    return meta


def synthesize_cfr_adtr(
    apm: ApmConfig,
    units: list[RtsUnitConfig],
    sweep: SweepSettings,
    *,
    noise: Optional[NoiseSettings] = None,
    metadata: Optional[dict] = None,
    workers: Optional[int] = None,
) -> CfrDataset:
    """
    Synthesize the switched-monostatic ADTR acquisition.

    H[i, j, k] = sum_n w_tx[k, n] w_rx[k, n] T_n[i, j]

    Args:
        apm: ADTR APM configuration (K x N)
        units: One RTS unit per target column
        sweep: Sweep settings (carrier, bandwidth, N_f)
        noise: Optional additive noise
        metadata: Scenario snapshot echo stored with the dataset
        workers: Thread count (None = up to 8)

    Returns:
        Dataset with axes (time, frequency, port)
    """
    if apm.mode is not SensingMode.ADTR:
        raise ModeMismatchError("synthesize_cfr_adtr needs an ADTR configuration")
    n_time, dt = _check_units(apm, units)
    times = np.arange(n_time, dtype=np.float64) * dt
    baseband = baseband_grid(sweep)
    terms = target_terms(units, times, baseband)
    signature = np.asarray(apm.weights_tx) * np.asarray(apm.weights_rx)  # (K, N)
    k_ports = apm.type_a_count
    label = str((metadata or {}).get("label", ""))

    samples = np.zeros((n_time, len(baseband), k_ports), dtype=np.complex128)

    def fill(k0: int, k1: int) -> None:
        block = samples[:, :, k0:k1]
        for n in range(len(units)):
            block += terms[n][:, :, None] * signature[k0:k1, n]

    logger.info(f"Synthesizing ADTR {n_time}x{len(baseband)}x{k_ports} CFR tensor ({label})")
    _run_port_chunks(k_ports, fill, label, workers)
    if noise is not None:
        add_noise(samples, noise)

    return CfrDataset(
        mode=SensingMode.ADTR,
        time_s=times,
        frequency_hz=sweep.carrier_hz + baseband,
        port_indices=(np.arange(k_ports, dtype=np.float64),),
        samples=samples,
        carrier_hz=sweep.carrier_hz,
        metadata=_metadata(metadata, units, sweep),
    )


def synthesize_cfr_satr(
    apm: ApmConfig,
    units: list[RtsUnitConfig],
    sweep: SweepSettings,
    *,
    noise: Optional[NoiseSettings] = None,
    metadata: Optional[dict] = None,
    workers: Optional[int] = None,
) -> CfrDataset:
    """
    Synthesize the dual-switch SATR acquisition over every Rx x Tx pair.

    H[i, r, t, j] = sum_n w_rx[r, n] w_tx[t, n] T_n[i, j]

    Args:
        apm: SATR APM configuration
        units: One RTS unit per target column
        sweep: Sweep settings
        noise: Optional additive noise
        metadata: Scenario snapshot echo stored with the dataset
        workers: Thread count (None = up to 8)

    Returns:
        Dataset with axes (time, rx_port, tx_port, frequency)
    """
    if apm.mode is not SensingMode.SATR:
        raise ModeMismatchError("synthesize_cfr_satr needs a SATR configuration")
    n_time, dt = _check_units(apm, units)
    times = np.arange(n_time, dtype=np.float64) * dt
    baseband = baseband_grid(sweep)
    terms = target_terms(units, times, baseband)

    tx_idx = np.flatnonzero(apm.tx_mask)
    rx_idx = np.flatnonzero(apm.rx_mask)
    w_tx = np.asarray(apm.weights_tx)[tx_idx]  # (K_T, N)
    w_rx = np.asarray(apm.weights_rx)[rx_idx]  # (K_R, N)
    label = str((metadata or {}).get("label", ""))

    samples = np.zeros((n_time, len(rx_idx), len(tx_idx), len(baseband)), dtype=np.complex128)

    def fill(r0: int, r1: int) -> None:
        block = samples[:, r0:r1]
        for n in range(len(units)):
            spatial = w_rx[r0:r1, n][:, None] * w_tx[:, n][None, :]  # (r, t)
            block += spatial[None, :, :, None] * terms[n][:, None, None, :]

    logger.info(
        f"Synthesizing SATR {n_time}x{len(rx_idx)}x{len(tx_idx)}x{len(baseband)} CFR tensor ({label})"
    )
    _run_port_chunks(len(rx_idx), fill, label, workers)
    if noise is not None:
        add_noise(samples, noise)

    return CfrDataset(
        mode=SensingMode.SATR,
        time_s=times,
        frequency_hz=sweep.carrier_hz + baseband,
        port_indices=(rx_idx.astype(np.float64), tx_idx.astype(np.float64)),
        samples=samples,
        carrier_hz=sweep.carrier_hz,
        metadata=_metadata(metadata, units, sweep),
    )
