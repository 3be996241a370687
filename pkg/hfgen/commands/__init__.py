"""
Commands Package
"""
from hfgen.commands import convergence, integrated, offdiag, radial, rotor

SUBCOMMANDS = [rotor, radial, integrated, offdiag, convergence]

__all__ = ["SUBCOMMANDS", "convergence", "integrated", "offdiag", "radial", "rotor"]
