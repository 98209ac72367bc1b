"""Run-level configuration: the device description and an experiment request.

Physical keys carry their unit as a suffix (``_GHz``, ``_MHz``, ``_ns``,
``_us``, ``_K``, ``_dB``, ``_rad``, ``_Hz``). This module is the only place
where they are converted to the internal units: GHz energies, rad/ns rates,
rad/s noise frequencies and μs decoherence times.
"""

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.errors import ConfigError, ParameterError, make_context
from ..core.units import TWO_PI, ghz_to_rad_per_ns, mhz_to_rad_per_ns
from ..device.circuits import FluxBias, QubitCircuitParams, QubitKind
from ..device.coupling import charging_capacitance_fF, drive_coupling_from_capacitance
from ..device.hamiltonians import effective_josephson_energy
from ..noise.psd import NoisePSD, PSDKind
from ..noise.rates import DecoherenceRates
from ..readout.amplifier import AmplifierChain, AmplifierStage, Paramp, ParampMode, db_to_linear
from ..readout.resonator import CouplingType, ResonatorParams


class ExperimentName(str, Enum):
    """Experiments the runner can dispatch."""

    SPECTRUM = "spectrum"
    RABI = "rabi"
    DRAG_SCAN = "drag-scan"
    T1 = "t1"
    RAMSEY = "ramsey"
    HAHN = "hahn"
    CPMG = "cpmg"
    ISWAP_CHEVRON = "iswap-chevron"
    CPHASE_CAL = "cphase-cal"
    CR_SCAN = "cr-scan"
    READOUT_HISTOGRAM = "readout-histogram"
    PURCELL = "purcell"
    PARAMP = "paramp"


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())


class QubitSpec(_Spec):
    """One qubit circuit with its optional decoherence truths."""

    name: str
    kind: QubitKind = QubitKind.TRANSMON
    EC_GHz: float = Field(gt=0, description="Charging energy")
    EJ_GHz: float = Field(gt=0, description="Josephson energy (sum for SQUIDs)")
    EL_GHz: Optional[float] = Field(default=None, gt=0, description="Inductive energy")
    d: float = Field(default=0.0, ge=-1.0, le=1.0, description="SQUID junction asymmetry")
    gamma: float = Field(default=1.0, gt=0, description="Flux-qubit junction ratio")
    N: int = Field(default=1, ge=1, description="Fluxonium array junctions")
    ng: float = Field(default=0.0, description="Offset charge")
    flux_rad: float = Field(default=0.0, description="External flux φ_e = 2πΦ/Φ₀")
    T1_us: Optional[float] = Field(default=None, gt=0)
    T2_us: Optional[float] = Field(default=None, gt=0, description="Ramsey T2*")
    T2E_us: Optional[float] = Field(default=None, gt=0, description="Echo T2")
    T_phi_G_us: Optional[float] = Field(default=None, gt=0, description="Gaussian dephasing time")
    drive_capacitance_fF: Optional[float] = Field(default=None, gt=0, description="Drive-line capacitance C_d")

    def circuit(self) -> QubitCircuitParams:
        return QubitCircuitParams(
            kind=self.kind,
            EC=self.EC_GHz,
            EJ=self.EJ_GHz,
            d=self.d,
            gamma=self.gamma,
            N=self.N,
            ng=self.ng,
            EL=self.EL_GHz,
        )

    def bias(self) -> FluxBias:
        return FluxBias(self.flux_rad)

    def drive_coupling(self) -> Optional[float]:
        """Drive coupling Ω in rad/(ns·V) from ``drive_capacitance_fF``, None without one."""
        if self.drive_capacitance_fF is None:
            return None
        if self.kind not in (QubitKind.TRANSMON, QubitKind.SPLIT_TRANSMON):
            raise ParameterError(
                f"qubit {self.name}: drive capacitance applies to transmons only",
                field_errors={"drive_capacitance_fF": ["supported for transmon and split_transmon qubits"]},
                context=make_context(__name__, "QubitSpec.drive_coupling", qubit=self.name),
            )
        EJ = self.EJ_GHz
        if self.kind == QubitKind.SPLIT_TRANSMON:
            EJ = effective_josephson_energy(self.EJ_GHz, self.d, self.bias())
        C_sigma = charging_capacitance_fF(self.EC_GHz)
        return drive_coupling_from_capacitance(self.drive_capacitance_fF, C_sigma, EJ, self.EC_GHz)

    def rates(self, echo: bool = False) -> DecoherenceRates:
        """Truth rates in 1/μs; ``echo`` prefers T2E over T2*."""
        if self.T1_us is None:
            raise ParameterError(
                f"qubit {self.name} has no T1_us",
                field_errors={"T1_us": ["required for decay experiments"]},
                context=make_context(__name__, "QubitSpec.rates", qubit=self.name),
            )
        T2 = (self.T2E_us or self.T2_us) if echo else self.T2_us
        return DecoherenceRates.from_times(self.T1_us, T2=T2, T_phi_G=self.T_phi_G_us)


class CouplingSpec(_Spec):
    qubits: Tuple[str, str]
    g_MHz: float = Field(gt=0)

    @property
    def g(self) -> float:
        return mhz_to_rad_per_ns(self.g_MHz)


class ResonatorSpec(_Spec):
    """Readout resonator attached to ``qubit``."""

    name: str = "r0"
    qubit: Optional[str] = None
    omega_r_GHz: float = Field(gt=0)
    kappa_MHz: float = Field(gt=0)
    chi_MHz: float = 0.0
    g_MHz: Optional[float] = Field(default=None, gt=0, description="Qubit-resonator coupling")
    coupling_type: CouplingType = CouplingType.REFLECTION

    def params(self) -> ResonatorParams:
        return ResonatorParams(
            omega_r=ghz_to_rad_per_ns(self.omega_r_GHz),
            kappa=mhz_to_rad_per_ns(self.kappa_MHz),
            chi=mhz_to_rad_per_ns(self.chi_MHz),
            coupling_type=self.coupling_type,
        )


class AmplifierStageSpec(_Spec):
    name: str = ""
    gain_dB: float = Field(ge=0)
    noise_temperature_K: float = Field(ge=0)


class ParampSpec(_Spec):
    gain_dB: float = Field(ge=0)
    mode: ParampMode = ParampMode.PHASE_INSENSITIVE
    phi_rad: float = 0.0


class ReadoutChainSpec(_Spec):
    """Amplifier stages ordered from the chip outwards."""

    stages: List[AmplifierStageSpec] = Field(default_factory=list)
    paramp: Optional[ParampSpec] = None

    def chain(self) -> AmplifierChain:
        stages = tuple(
            AmplifierStage.from_dB(s.gain_dB, s.noise_temperature_K, s.name) for s in self.stages
        )
        paramp = None
        if self.paramp is not None:
            paramp = Paramp(db_to_linear(self.paramp.gain_dB), self.paramp.mode, self.paramp.phi_rad)
        return AmplifierChain(stages, paramp)


class NoiseSpec(_Spec):
    """Dephasing noise spectrum of a control variable λ (flux in Φ₀, say).

    ``amplitude`` is A² for 1/f, B² for ohmic and S₀ for white noise, in
    units of λ². The sensitivity ∂ω₀₁/∂λ is given in GHz per unit λ.
    """

    kind: PSDKind = PSDKind.ONE_OVER_F
    amplitude: float = Field(default=0.0, ge=0)
    exponent: float = Field(default=1.0, gt=0)
    f_ir_Hz: Optional[float] = Field(default=None, gt=0)
    f_uv_Hz: Optional[float] = Field(default=None, gt=0)
    chi_MHz: float = 0.0
    kappa_MHz: float = Field(default=0.0, ge=0)
    n_bar: float = Field(default=0.0, ge=0)
    eta: float = Field(default=1.0, ge=0)
    sensitivity_GHz: float = Field(default=0.0, description="∂ω₀₁/∂λ / 2π")

    def psd(self) -> NoisePSD:
        if self.kind == PSDKind.LORENTZIAN:
            return NoisePSD.lorentzian(
                chi=TWO_PI * self.chi_MHz * 1e6,
                kappa=TWO_PI * self.kappa_MHz * 1e6,
                n_bar=self.n_bar,
                eta=self.eta,
            )
        band = {}
        if self.f_ir_Hz is not None:
            band["omega_ir"] = TWO_PI * self.f_ir_Hz
        if self.f_uv_Hz is not None:
            band["omega_uv"] = TWO_PI * self.f_uv_Hz
        return NoisePSD(self.kind, amplitude=self.amplitude, exponent=self.exponent, **band)

    @property
    def dOmega_dLambda(self) -> float:
        """Sensitivity in rad/s per unit λ."""
        return TWO_PI * self.sensitivity_GHz * 1e9


class DeviceSpec(_Spec):
    """Qubits, couplings, resonators, readout chain and noise of one chip."""

    name: str = "device"
    qubits: List[QubitSpec] = Field(min_length=1)
    couplings: List[CouplingSpec] = Field(default_factory=list)
    resonators: List[ResonatorSpec] = Field(default_factory=list)
    readout_chain: Optional[ReadoutChainSpec] = None
    noise: Optional[NoiseSpec] = None

    @model_validator(mode="after")
    def check_references(self) -> "DeviceSpec":
        names = [q.name for q in self.qubits]
        if len(set(names)) != len(names):
            raise ValueError(f"qubit names must be unique, got {names}")
        for c in self.couplings:
            unknown = [n for n in c.qubits if n not in names]
            if unknown:
                raise ValueError(f"coupling references unknown qubits {unknown}")
        for r in self.resonators:
            if r.qubit is not None and r.qubit not in names:
                raise ValueError(f"resonator {r.name} references unknown qubit {r.qubit}")
        return self

    def qubit(self, name: Optional[str] = None) -> QubitSpec:
        if name is None:
            return self.qubits[0]
        for q in self.qubits:
            if q.name == name:
                return q
        raise _missing("qubit", name)

    def resonator(self, name: Optional[str] = None) -> ResonatorSpec:
        for r in self.resonators:
            if name is None or r.name == name:
                return r
        raise _missing("resonator", name or "any")

    def coupling(self, a: str, b: str) -> Optional[CouplingSpec]:
        for c in self.couplings:
            if set(c.qubits) == {a, b}:
                return c
        return None


def _missing(section: str, name: str) -> ConfigError:
    return ConfigError(
        f"device has no {section} {name!r}",
        field_errors={f"device.{section}s": [f"no entry named {name!r}"]},
        context=make_context(__name__, "DeviceSpec", section=section, name=name),
    )


class ExperimentConfig(_Spec):
    """One experiment run: device, experiment kind, parameters, seed and output."""

    device: DeviceSpec
    experiment: ExperimentName
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0, lt=2**64)
    output: Path = Path("results")

    def canonical(self) -> Dict[str, Any]:
        """JSON-ready content identifying the run; the output location is excluded."""
        return self.model_dump(mode="json", exclude={"output"})

    def config_hash(self) -> str:
        """sha256 of the canonical sorted-key JSON, stable under key reordering."""
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def field_errors(error: ValidationError) -> Dict[str, List[str]]:
    """Pydantic errors keyed by dotted field path."""
    errors: Dict[str, List[str]] = {}
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        errors.setdefault(path, []).append(item["msg"])
    return errors


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(
            f"cannot read {path}: {e}",
            field_errors={"<file>": [str(e)]},
            context=make_context(__name__, "load_experiment_config", path=str(path)),
        ) from e
    if not isinstance(data, dict):
        raise ConfigError(
            f"{path} does not contain a mapping",
            field_errors={"<root>": ["expected a key-value mapping"]},
            context=make_context(__name__, "load_experiment_config", path=str(path)),
        )
    return data


def read_config_data(path: Union[str, Path]) -> Dict[str, Any]:
    """Raw configuration mapping with a device file reference inlined.

    ``device`` may be a mapping or a path relative to the config file.
    """
    path = Path(path)
    data = _read_yaml(path)
    device = data.get("device")
    if isinstance(device, str):
        data["device"] = _read_yaml(path.parent / device)
    return data


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a raw mapping.

    Raises:
        ConfigError: with pydantic field paths in ``field_errors``
    """
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        errors = field_errors(e)
        raise ConfigError(
            f"invalid experiment configuration: {len(errors)} field(s) failed validation",
            field_errors=errors,
            context=make_context(__name__, "parse_experiment_config"),
        ) from e


def load_experiment_config(path: Union[str, Path], **overrides: Any) -> ExperimentConfig:
    """Load and validate an experiment configuration file.

    Args:
        path: YAML (or JSON) file
        overrides: top-level keys replacing the file values when not None

    Raises:
        ConfigError: unreadable file or validation failure
    """
    data = read_config_data(path)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return parse_experiment_config(data)
