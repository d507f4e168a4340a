"""instanton_lab: instantons on flat G-structures.

Exact exterior algebra and Lie-subalgebra computations on R^n, radial
SU(2)/G2/Spin(7) instanton checks, the radial Yang–Mills system, and
Nahm-equation constructions of quaternionic instantons.
"""
__version__ = "0.1.0"
