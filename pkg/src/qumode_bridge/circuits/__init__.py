"""Gate-level circuits for qumode operations on qubit registers."""
from .compile import (compile_cphase, compile_cubic, compile_displacement,
                      compile_kinetic, compile_phase, compile_qft,
                      compile_shifted_qft, cubic_cnot_count, phase_cnot_count)
from .gates import (Circuit, Gate, GateCount, emit_circuit_text, gate_count,
                    parse_circuit_text)
from .simulate import circuit_unitary, diagonal_entries, simulate

__all__ = [
    "Circuit", "Gate", "GateCount", "circuit_unitary", "compile_cphase", "diagonal_entries",
    "compile_cubic", "compile_displacement", "compile_kinetic", "compile_phase",
    "compile_qft", "compile_shifted_qft", "cubic_cnot_count", "emit_circuit_text",
    "gate_count", "parse_circuit_text", "phase_cnot_count", "simulate",
]
