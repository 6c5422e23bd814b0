"""gca-lab: φ-cellular automata between configuration spaces over groups.

A φ-cellular automaton 𝒯 : A^G → A^H is a homomorphism φ : H → G plus a
local rule μ over a finite memory set T ⊆ G, evaluated as
𝒯(x)(h) = μ(t ↦ x(φ(h)t)). Finite groups are handled exhaustively;
ℤ^d through lattice arithmetic.
"""

__version__ = "0.1.0"
