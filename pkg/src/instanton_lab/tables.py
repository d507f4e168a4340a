"""Printed Lie-algebra bases, transcribed verbatim.

Each row is ``(matrix, form)``; each side is ``(prefactor, radical, terms)``
meaning ``prefactor * sqrt(radical) * (terms)``.  Radicals are kept apart so
the rational parts stay exact.  Matrix terms use the elementary matrices
``Ekl``; form terms use ``dxij`` with indices in printed order.

The spin(7) rows for e3 and e14 are reproduced exactly as printed, including
the self-cancelling ``-E56+E56`` and the non-skew ``E88``;
:func:`instanton_lab.liealg.table_algebra` detects and repairs them.
"""
from fractions import Fraction as Q

R1 = Q(1)
R3 = Q(1, 3)
R6 = Q(1, 6)

SU2 = (
    ((Q(1, 2), R1, "-E12+E21+E34-E43"), (Q(1), R1, "dx12-dx34")),
    ((Q(1, 2), R1, "-E13+E31+E42-E24"), (Q(1), R1, "dx13-dx42")),
    ((Q(1, 2), R1, "-E14+E41+E23-E32"), (Q(1), R1, "dx14-dx23")),
)

G2 = (
    ((Q(1, 4), R1, "E23-E32-E45+E54"), (Q(-1, 4), R1, "dx23-dx45")),
    ((Q(-1, 4), R3, "E23-E32+E45-E54-2E67+2E76"), (Q(1, 4), R3, "dx23+dx45-2dx67")),
    ((Q(1, 4), R1, "E13-E31+E46-E64"), (Q(-1, 4), R1, "dx13+dx46")),
    ((Q(-1, 4), R3, "E13-E31-E46+E64-2E57+2E75"), (Q(1, 4), R3, "dx13-dx46-2dx57")),
    ((Q(-1, 4), R1, "E12-E21+E47-E74"), (Q(1, 4), R1, "dx12+dx47")),
    ((Q(1, 4), R3, "E12-E21-E47+E74+2E56-2E65"), (Q(-1, 4), R3, "dx12-dx47+2dx56")),
    ((Q(1, 4), R1, "E15-E51-E26+E62"), (Q(-1, 4), R1, "dx15-dx26")),
    ((Q(1, 4), R3, "E15-E51+E26-E62+2E37-2E73"), (Q(-1, 4), R3, "dx15+dx26+2dx37")),
    ((Q(-1, 4), R1, "E14-E41-E27+E72"), (Q(1, 4), R1, "dx14-dx27")),
    ((Q(-1, 4), R3, "E14-E41+E27-E72-2E36+2E63"), (Q(1, 4), R3, "dx14+dx27-2dx36")),
    ((Q(1, 4), R1, "E17-E71+E24-E42"), (Q(-1, 4), R1, "dx17+dx24")),
    ((Q(1, 4), R3, "E17-E71-E24+E42-2E35+2E53"), (Q(-1, 4), R3, "dx17-dx24-2dx35")),
    ((Q(-1, 4), R1, "E16-E61+E25-E52"), (Q(1, 4), R1, "dx16+dx25")),
    ((Q(-1, 4), R3, "E16-E61-E25+E52+2E34-2E43"), (Q(1, 4), R3, "dx16-dx25+2dx34")),
)

SPIN7 = (
    ((Q(1), R1, "-E12+E21-E47+E74"), (Q(1), R1, "dx12+dx47")),
    ((Q(1), R3, "-E12+E21+E47-E74-2E56+2E65"), (Q(1), R3, "dx12-dx47+2dx56")),
    ((Q(1), R6, "E12-E21-3E38+3E83-E47+E74-E56+E56"), (Q(1), R6, "-dx12+3dx38+dx47+dx56")),
    ((Q(1), R1, "-E13+E31-E46+E64"), (Q(1), R1, "dx13+dx46")),
    ((Q(1), R3, "E13-E31-E46+E64-2E57+2E75"), (Q(1), R3, "-dx13+dx46+2dx57")),
    ((Q(1), R6, "-E13+E31-3E28+3E82+E46-E64-E57+E75"), (Q(1), R6, "dx13+3dx28-dx46+dx57")),
    ((Q(1), R1, "E14-E41-E27+E72"), (Q(1), R1, "-dx14+dx27")),
    ((Q(1), R3, "E14-E41+E27-E72-2E58+2E85"), (Q(-1), R3, "dx14+dx27-2dx58")),
    ((Q(1), R6, "E14-E41+E27-E72-3E36+3E63+E58-E85"), (Q(1), R6, "-dx14-dx27+3dx36-dx58")),
    ((Q(1), R1, "-E15+E51-E48+E84"), (Q(1), R1, "dx15+dx48")),
    ((Q(1), R3, "E15-E51-2E26+2E62-E48+E84"), (Q(1), R3, "-dx15+2dx26+dx48")),
    ((Q(1), R6, "-E15+E51-E26+E62-3E37+3E73+E48-E84"), (Q(1), R6, "dx15+dx26+3dx37-dx48")),
    ((Q(1), R1, "E16-E61-E78+E87"), (Q(1), R1, "-dx16+dx78")),
    ((Q(1), R3, "-E16+E61-2E25+2E52-E78+E88"), (Q(1), R3, "dx16+2dx25+dx78")),
    ((Q(1), R6, "-E16+E61+E25-E52-3E34+3E43-E78+E87"), (Q(1), R6, "dx16-dx25+3dx34+dx78")),
    ((Q(1), R1, "-E17+E71-E68+E86"), (Q(1), R1, "dx17+dx68")),
    ((Q(1), R3, "-E17+E71-2E24+2E42+E68-E86"), (Q(1), R3, "dx17+2dx24-dx68")),
    ((Q(1), R6, "E17-E71-E24+E42-3E35+3E53-E68+E86"), (Q(1), R6, "-dx17+dx24+3dx35+dx68")),
    ((Q(1), R1, "E18-E81-E23+E32"), (Q(1), R1, "-dx18+dx23")),
    ((Q(1), R3, "E18-E81-2E45+2E54+E23-E32"), (Q(1), R3, "-dx18+2dx45-dx23")),
    ((Q(1), R6, "E18-E81+E23-E32+E45-E54-3E67+3E76"), (Q(-1), R6, "dx18+dx23+dx45-3dx67")),
)

TABLES = {"su2": (4, SU2), "g2": (7, G2), "spin7": (8, SPIN7)}

# 1-forms x ⌟ β_j at the printed reference points, as (prefactor, radical, terms);
# "0" marks a vanishing entry.
G2_ALPHA_AT_E1 = (
    (Q(0), R1, "0"), (Q(0), R1, "0"),
    (Q(-1, 4), R1, "dx3"), (Q(1, 4), R3, "dx3"),
    (Q(1, 4), R1, "dx2"), (Q(-1, 4), R3, "dx2"),
    (Q(-1, 4), R1, "dx5"), (Q(-1, 4), R3, "dx5"),
    (Q(1, 4), R1, "dx4"), (Q(1, 4), R3, "dx4"),
    (Q(-1, 4), R1, "dx7"), (Q(-1, 4), R3, "dx7"),
    (Q(1, 4), R1, "dx6"), (Q(1, 4), R3, "dx6"),
)

SPIN7_ALPHA_AT_E8 = (
    (Q(0), R1, "0"), (Q(0), R1, "0"),
    (Q(-1), Q(3, 2), "dx3"),
    (Q(0), R1, "0"), (Q(0), R1, "0"),
    (Q(-1), Q(3, 2), "dx2"),
    (Q(0), R1, "0"),
    (Q(-2), R3, "dx5"), (Q(1), R6, "dx5"),
    (Q(-1), R1, "dx4"), (Q(-1), R3, "dx4"), (Q(1), R6, "dx4"),
    (Q(-1), R1, "dx7"), (Q(-1), R3, "dx7"), (Q(-1), R6, "dx7"),
    (Q(-1), R1, "dx6"), (Q(1), R3, "dx6"), (Q(-1), R6, "dx6"),
    (Q(1), R1, "dx1"), (Q(1), R3, "dx1"), (Q(1), R6, "dx1"),
)

# Tangential parts β_j|_S at the reference point (terms without the radial index).
G2_BETA_SPHERE_AT_E1 = (
    (Q(-1, 4), R1, "dx23-dx45"), (Q(1, 4), R3, "dx23+dx45-2dx67"),
    (Q(-1, 4), R1, "dx46"), (Q(1, 4), R3, "-dx46-2dx57"),
    (Q(1, 4), R1, "dx47"), (Q(1, 4), R3, "dx47-2dx56"),
    (Q(1, 4), R1, "dx26"), (Q(-1, 4), R3, "dx26+2dx37"),
    (Q(-1, 4), R1, "dx27"), (Q(1, 4), R3, "dx27-2dx36"),
    (Q(-1, 4), R1, "dx24"), (Q(1, 4), R3, "dx24+2dx35"),
    (Q(1, 4), R1, "dx25"), (Q(1, 4), R3, "-dx25+2dx34"),
)

SPIN7_BETA_SPHERE_AT_E8 = (
    (Q(1), R1, "dx12+dx47"), (Q(1), R3, "dx12-dx47+2dx56"), (Q(1), R6, "-dx12+dx47+dx56"),
    (Q(1), R1, "dx13+dx46"), (Q(1), R3, "-dx13+dx46+2dx57"), (Q(1), R6, "dx13-dx46+dx57"),
    (Q(1), R1, "-dx14+dx27"), (Q(-1), R3, "dx14+dx27"), (Q(1), R6, "-dx14-dx27+3dx36"),
    (Q(1), R1, "dx15"), (Q(1), R3, "-dx15+2dx26"), (Q(1), R6, "dx15+dx26+3dx37"),
    (Q(1), R1, "-dx16"), (Q(1), R3, "dx16+2dx25"), (Q(1), R6, "dx16-dx25+3dx34"),
    (Q(1), R1, "dx17"), (Q(1), R3, "dx17+2dx24"), (Q(1), R6, "-dx17+dx24+3dx35"),
    (Q(1), R1, "dx23"), (Q(1), R3, "2dx45-dx23"), (Q(-1), R6, "dx23+dx45-3dx67"),
)
