"""
Dyadic blocks and the hyperbolic cross
======================================

"""

# Frequencies are grouped into dyadic blocks rho(s); the blocks with
# s_1 + ... + s_d = j form the layer j, and layers 0..n form Q_n.
from sampling_recovery import dyadic_block, full_cube, hyperbolic_cross, layer

print(dyadic_block((2, 1)).to_text())

# Layer sizes grow like 2^j j^(d-1), far slower than the full cube.
for n in range(7):
    print(n, len(layer(n, 2)), len(hyperbolic_cross(n, 2)), len(full_cube(2 ** n, 2)))
