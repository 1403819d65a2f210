"""
Program / spectrum documents
Versioned JSON for pulse programs and stick spectra.
"""

import json
import logging
import os
from typing import Any, Dict, List

from src.core.config import DOCUMENTS
from src.core.errors import InvalidPulse, NegativeDuration, ProgramParseError
from src.core.pulses import (
    Duration,
    HamiltonianParams,
    Idle,
    PulseSequence,
    Rot,
    RotationStep,
    Step,
)
from src.hardware.readout import StickSpectrum

log = logging.getLogger("warpdrive.io")


def program_to_dict(s: PulseSequence) -> Dict[str, Any]:
    records: List[Dict[str, Any]] = []
    for index, step in enumerate(s.steps):
        if isinstance(step, Idle):
            records.append(
                {
                    "step": index,
                    "kind": "idle",
                    "seconds": step.seconds,
                    "j_units": step.duration.j_units,
                }
            )
            continue
        for rot in step.rotations:
            records.append(
                {
                    "step": index,
                    "kind": "rot",
                    "qubit": rot.qubit,
                    "phase_angle": rot.phase_angle,
                    "flip_angle": rot.flip_angle,
                }
            )
    return {
        "format": DOCUMENTS["program_format"],
        "version": DOCUMENTS["program_version"],
        "j_hz": s.j_hz,
        "target": s.target_description,
        "totals": {
            "coupling_time_s": s.coupling_time.value,
            "coupling_time_j_units": s.coupling_time.j_units,
            "pulse_count": s.pulse_count,
            "rf_time_s": s.rf_time(HamiltonianParams(j_coupling=s.j_hz)),
        },
        "records": records,
    }


def program_to_json(s: PulseSequence) -> str:
    return json.dumps(program_to_dict(s), indent=2, sort_keys=True) + "\n"


def program_from_dict(data: Dict[str, Any]) -> PulseSequence:
    if data.get("format") != DOCUMENTS["program_format"]:
        raise ProgramParseError(f"not a pulse program document (format {data.get('format')!r})")
    if data.get("version") != DOCUMENTS["program_version"]:
        raise ProgramParseError(f"unsupported program version {data.get('version')!r}")
    try:
        j_hz = float(data["j_hz"])
        grouped: Dict[int, List[Dict[str, Any]]] = {}
        for record in data["records"]:
            grouped.setdefault(int(record["step"]), []).append(record)

        steps: List[Step] = []
        for index in sorted(grouped):
            records = grouped[index]
            kinds = {r["kind"] for r in records}
            if kinds == {"idle"} and len(records) == 1:
                r = records[0]
                if "j_units" in r:
                    duration = Duration.from_j_units(float(r["j_units"]), j_hz)
                else:
                    duration = Duration.from_seconds(float(r["seconds"]), j_hz)
                steps.append(Idle(duration))
            elif kinds == {"rot"}:
                steps.append(
                    RotationStep(
                        tuple(
                            Rot(int(r["qubit"]), float(r["phase_angle"]), float(r["flip_angle"]))
                            for r in records
                        )
                    )
                )
            else:
                raise ProgramParseError(f"step {index} mixes idles and rotations")
    except (KeyError, TypeError, ValueError) as exc:
        raise ProgramParseError(f"malformed program record: {exc}") from exc
    except (InvalidPulse, NegativeDuration) as exc:
        raise ProgramParseError(str(exc)) from exc
    return PulseSequence(tuple(steps), j_hz, str(data.get("target", "")))


def dump_program(s: PulseSequence, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(program_to_json(s))
    log.info(f"wrote program with {len(s.steps)} steps to {path}")


def load_program(path: str) -> PulseSequence:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ProgramParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ProgramParseError(f"{path}: expected a JSON object")
    return program_from_dict(data)


def spectrum_to_dict(spectrum: StickSpectrum) -> Dict[str, Any]:
    return {
        "format": DOCUMENTS["spectrum_format"],
        "version": DOCUMENTS["spectrum_version"],
        "columns": ["ppm", "amplitude"],
        "lines": [[line.position, line.amplitude] for line in spectrum.lines],
    }


def spectrum_to_json(spectrum: StickSpectrum) -> str:
    return json.dumps(spectrum_to_dict(spectrum), indent=2, sort_keys=True) + "\n"
