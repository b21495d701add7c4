"""polevault: blow-up cascades, resonance analysis and pole-vaulting numeric
continuation for compactified polynomial Hamiltonian ODE systems."""

__version__ = "0.1.0"
