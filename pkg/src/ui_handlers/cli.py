"""
Command-line front end: decompose, warp, compile, simulate, reference.

Reports go to stdout; logs go to stderr.
"""

import argparse
import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.config import (
    CATALOG_CHOICES,
    DEFAULTS,
    EXIT_CODES,
    OUTPUT_CHOICES,
    TIE_BREAK_CHOICES,
    RunConfig,
)
from src.core.errors import (
    ConfigError,
    MatrixParseError,
    NotUnitary,
    ProgramParseError,
    VerificationFailure,
    WarpDriveError,
)
from src.core.formatting import format_angle, format_j_units
from src.core.kak import KakDecomposition, LocalGatePair, decompose
from src.core.pulses import HamiltonianParams, PulseSequence
from src.core.su4 import check_unitary, phase_distance
from src.hardware.hard_pulse_sim import (
    BASIS_LABELS,
    StateVector4,
    apply,
    dominant_label,
    simulate_sequence,
)
from src.hardware.readout import StickSpectrum, predict_spectrum
from src.services.pulse_compiler import compile_decomposition, emit_table
from src.services.program_io import (
    dump_program,
    load_program,
    program_to_dict,
    spectrum_to_dict,
)
from src.services.reference_sequences import convention_sweep, reference_names
from src.services.warp_service import WarpGate, WarpSearchResult, WarpService, coupling_time
from src.ui_handlers.matrix_source import resolve_source

log = logging.getLogger("warpdrive.cli")

WARP_CHOICES_HELP = "W0..W5 (W0..W23 with --catalog all24), auto or none"


# --- Parsing ---


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--j-hz", type=float, default=None, help="J coupling in Hz (default 215.5)")
    common.add_argument("--tolerance", type=float, default=None, help="verification tolerance")
    common.add_argument("--catalog", choices=CATALOG_CHOICES, default=None)
    common.add_argument("--tie-break", choices=TIE_BREAK_CHOICES, default=None)
    common.add_argument("--output", choices=OUTPUT_CHOICES, default=None)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="warpdrive",
        description="Time-optimal two-qubit gate compiler for NMR with warp-drive search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="Cartan decomposition of a gate")
    p.add_argument("source", help="matrix source, e.g. grover:10 or warp:W4*grover:10")
    p.add_argument("--warp", default=DEFAULTS["warp"], help=WARP_CHOICES_HELP)

    p = sub.add_parser("warp", parents=[common], help="time the gate behind every warp gate")
    p.add_argument("source")
    p.add_argument("--prefer", default=None, help="pick this gate when it is among the fastest")
    p.add_argument("--workers", type=int, default=None, help="evaluate gates in a thread pool")

    p = sub.add_parser("compile", parents=[common], help="compile a gate to a pulse program")
    p.add_argument("source")
    p.add_argument("--warp", default=DEFAULTS["warp"], help=WARP_CHOICES_HELP)
    p.add_argument("--verify", action="store_true", help="certify with the hard-pulse simulator")
    p.add_argument("--prefix", default=None, help="write PREFIX.json and PREFIX.txt")

    p = sub.add_parser("simulate", parents=[common], help="run a pulse program")
    p.add_argument("program", help="program JSON file, or a matrix source compiled on the fly")
    p.add_argument("--warp", default=DEFAULTS["warp"], help="warp gate for on-the-fly compilation")
    p.add_argument("--initial", choices=BASIS_LABELS, default=DEFAULTS["initial"])
    p.add_argument("--spectrum", action="store_true", help="predict the stick spectrum")
    p.add_argument("--decode", default=None, help="undo this warp gate on the dominant output")
    p.add_argument("--unitary", action="store_true", help="also print the simulated unitary")

    p = sub.add_parser("reference", parents=[common], help="check the published programs")
    p.add_argument("name", choices=("U10", "W4U10", "all"), nargs="?", default="all")
    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig.from_env(
        j_hz=args.j_hz,
        tolerance=args.tolerance,
        catalog=args.catalog,
        tie_break=args.tie_break,
        output=args.output,
    )


# --- Formatting helpers ---


def _coords_text(coords) -> str:
    return "(" + ", ".join(format_angle(a) for a in coords.as_tuple()) + ")"


def _complex_text(z: complex) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    return f"{re:+.6f}{im:+.6f}i"


def _matrix_text(m: np.ndarray, indent: str = "    ") -> str:
    return "\n".join(indent + "  ".join(_complex_text(z) for z in row) for row in m)


def _matrix_data(m: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _pair_data(pair: LocalGatePair) -> Dict[str, Any]:
    return {"a": _matrix_data(pair.a), "b": _matrix_data(pair.b)}


def _emit(config: RunConfig, structured: Dict[str, Any], text: str) -> None:
    if config.output == "structured":
        print(json.dumps(structured, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# --- Shared pipeline ---


def _load_target(source: str) -> np.ndarray:
    return check_unitary(resolve_source(source))


def _warp_gate(service: WarpService, gate_id: str) -> WarpGate:
    try:
        return service.gate(gate_id)
    except KeyError as exc:
        raise ConfigError(f"unknown warp gate {gate_id!r}; expected {WARP_CHOICES_HELP}") from exc


def _apply_warp(u: np.ndarray, warp: str, config: RunConfig) -> Tuple[np.ndarray, Optional[str]]:
    if warp == "none":
        return u, None
    service = WarpService(config.j_hz, config.catalog)
    gate_id = service.search(u).selected if warp == "auto" else warp
    gate = _warp_gate(service, gate_id)
    return gate.matrix @ u, gate.id


def _describe(source: str, gate_id: Optional[str]) -> str:
    return f"{gate_id} * ({source})" if gate_id else source


def _compile(source: str, warp: str, config: RunConfig):
    u = _load_target(source)
    target, gate_id = _apply_warp(u, warp, config)
    d = decompose(target)
    params = HamiltonianParams(j_coupling=config.j_hz)
    sequence = compile_decomposition(d, params, _describe(source, gate_id))
    return target, gate_id, d, sequence


# --- Commands ---


def cmd_decompose(args: argparse.Namespace, config: RunConfig) -> int:
    u = _load_target(args.source)
    target, gate_id = _apply_warp(u, args.warp, config)
    d: KakDecomposition = decompose(target)
    duration = coupling_time(d.coords, config.j_hz)

    structured = {
        "target": _describe(args.source, gate_id),
        "coords": list(d.coords.as_tuple()),
        "k1": _pair_data(d.k1),
        "k2": _pair_data(d.k2),
        "global_phase": d.global_phase,
        "coupling_time_s": duration.value,
        "coupling_time_j_units": duration.j_units,
    }
    text = "\n".join(
        [
            f"target:        {_describe(args.source, gate_id)}",
            f"coordinates:   {_coords_text(d.coords)}",
            f"coupling time: {format_j_units(duration.j_units)} ({duration.value * 1e3:.6f} ms)",
            f"global phase:  {format_angle(d.global_phase)}",
            "k1 (qubit 1):",
            _matrix_text(d.k1.a),
            "k1 (qubit 2):",
            _matrix_text(d.k1.b),
            "k2 (qubit 1):",
            _matrix_text(d.k2.a),
            "k2 (qubit 2):",
            _matrix_text(d.k2.b),
        ]
    )
    _emit(config, structured, text)
    return EXIT_CODES["ok"]


def _warp_rows(result: WarpSearchResult, service: WarpService) -> List[Dict[str, Any]]:
    rows = []
    for record in result.records:
        gate = service.gate(record.gate_id)
        rows.append(
            {
                "gate": record.gate_id,
                "coords": list(record.coords.as_tuple()),
                "coupling_time_s": record.duration.value,
                "coupling_time_j_units": record.duration.j_units,
                "decode": gate.inverse_map(),
                "minimal": record.gate_id in result.minimizers,
            }
        )
    return rows


def cmd_warp(args: argparse.Namespace, config: RunConfig) -> int:
    u = _load_target(args.source)
    service = WarpService(config.j_hz, config.catalog, args.workers)
    result = service.search(u, args.prefer)
    rows = _warp_rows(result, service)
    structured = {
        "target": args.source,
        "records": rows,
        "minimizers": list(result.minimizers),
        "selected": result.selected,
    }

    lines = [f"{'gate':<5} {'coordinates':<22} {'time':<8} decode (observed->output)"]
    for row, record in zip(rows, result.records):
        mark = "*" if row["minimal"] else " "
        decode = " ".join(f"{k}->{v}" for k, v in sorted(row["decode"].items()))
        lines.append(
            f"{record.gate_id + mark:<5} {_coords_text(record.coords):<22} "
            f"{format_j_units(record.duration.j_units):<8} {decode}"
        )
    if config.tie_break == "report-all":
        lines.append(f"fastest: {', '.join(result.minimizers)}")
    else:
        lines.append(f"selected: {result.selected} (fastest: {', '.join(result.minimizers)})")
    _emit(config, structured, "\n".join(lines))
    return EXIT_CODES["ok"]


def _verify(sequence: PulseSequence, target: np.ndarray, config: RunConfig) -> float:
    simulated = simulate_sequence(sequence, HamiltonianParams(j_coupling=config.j_hz))
    distance = phase_distance(simulated, target)
    log.info(f"verification distance {distance:.3e} (tolerance {config.tolerance:.1e})")
    if distance > config.tolerance:
        raise VerificationFailure(distance, config.tolerance)
    return distance


def cmd_compile(args: argparse.Namespace, config: RunConfig) -> int:
    target, gate_id, d, sequence = _compile(args.source, args.warp, config)
    distance = _verify(sequence, target, config) if args.verify else None

    if args.prefix:
        # dump_program creates the directory
        dump_program(sequence, f"{args.prefix}.json")
        with open(f"{args.prefix}.txt", "w") as f:
            f.write(emit_table(sequence))

    structured = program_to_dict(sequence)
    if distance is not None:
        structured["verification"] = {"phase_distance": distance, "tolerance": config.tolerance}
    text = emit_table(sequence)
    if distance is not None:
        text += f"verified: phase distance {distance:.3e} <= {config.tolerance:.1e}\n"
    _emit(config, structured, text)
    return EXIT_CODES["ok"]


def _read_program(args: argparse.Namespace, config: RunConfig) -> PulseSequence:
    if os.path.isfile(args.program):
        with open(args.program, "r") as f:
            head = f.read(64).lstrip()
        if head.startswith("{"):
            return load_program(args.program)
    _, _, _, sequence = _compile(args.program, args.warp, config)
    return sequence


def _spectrum_text(spectrum: StickSpectrum) -> str:
    if not spectrum.lines:
        return "spectrum: no lines"
    return "spectrum:\n" + "\n".join(
        f"    {line.position:7.2f} ppm  {line.amplitude:+.6f}" for line in spectrum.lines
    )


def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> int:
    sequence = _read_program(args, config)
    u = simulate_sequence(sequence, HamiltonianParams(j_coupling=sequence.j_hz))
    psi = apply(u, StateVector4.basis(args.initial))
    label = dominant_label(psi)

    structured: Dict[str, Any] = {
        "initial": args.initial,
        "state": {k: [float(z.real), float(z.imag)] for k, z in zip(BASIS_LABELS, psi.amplitudes)},
        "dominant": label,
    }
    lines = [f"initial: |{args.initial}>", "state:"]
    lines += [f"    |{k}>  {_complex_text(z)}" for k, z in zip(BASIS_LABELS, psi.amplitudes)]
    lines.append(f"dominant: |{label}>")

    if args.unitary:
        structured["unitary"] = _matrix_data(u)
        lines += ["unitary:", _matrix_text(u)]
    if args.decode:
        service = WarpService(config.j_hz, config.catalog)
        gate = _warp_gate(service, args.decode)
        decoded = service.decode(gate.id, label)
        structured["decoded"] = decoded
        lines.append(f"decoded via {gate.id}: {decoded}")
    if args.spectrum:
        spectrum = predict_spectrum(psi)
        structured["spectrum"] = spectrum_to_dict(spectrum)
        lines.append(_spectrum_text(spectrum))

    _emit(config, structured, "\n".join(lines))
    return EXIT_CODES["ok"]


def cmd_reference(args: argparse.Namespace, config: RunConfig) -> int:
    names = reference_names() if args.name == "all" else (args.name,)
    structured: Dict[str, Any] = {}
    lines = []
    for name in names:
        results = convention_sweep(name, config.j_hz)
        structured[name] = [
            {
                "convention": r.convention.label,
                "phase_distance": r.report.phase_distance,
                "same_local_class": r.report.same_local_class,
            }
            for r in results
        ]
        lines.append(f"{name}:")
        for r in results:
            lines.append(
                f"    {r.convention.label:<22} distance {r.report.phase_distance:.3e}  "
                f"same class {'yes' if r.report.same_local_class else 'no'}"
            )
    _emit(config, structured, "\n".join(lines))
    return EXIT_CODES["ok"]


COMMANDS = {
    "decompose": cmd_decompose,
    "warp": cmd_warp,
    "compile": cmd_compile,
    "simulate": cmd_simulate,
    "reference": cmd_reference,
}


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger("warpdrive").setLevel(logging.DEBUG)

    try:
        config = run_config(args)
        log.info(f"running {args.command}")
        return COMMANDS[args.command](args, config)
    except (MatrixParseError, ProgramParseError, ConfigError) as exc:
        log.error(str(exc))
        print(f"error: {exc}")
        return EXIT_CODES["parse"]
    except NotUnitary as exc:
        log.error(str(exc))
        print(f"error: input is not unitary (residual {exc.residual:.3e})")
        return EXIT_CODES["invalid_input"]
    except VerificationFailure as exc:
        log.error(str(exc))
        print(f"error: {exc}")
        return EXIT_CODES["verification"]
    except WarpDriveError as exc:
        log.error(str(exc))
        print(f"error: {exc}")
        return EXIT_CODES["invalid_input"]
