"""Lie series of vector fields and the companion field of a scalar ODE.

The flow of z^2 d/dz is the Moebius family z / (1 - t z); the flow of a
rotation gives cos and sin.  Finally f' = f + z with f(0) = 0 is solved by
following the companion field from the origin.
"""

from germcalc import OdeSpec, Series, VectorField, flow_series, ode_solve
from germcalc.flows import flow_group_defect

(z,) = Series.variables(1, 6)
Phi = flow_series(VectorField([z * z]), 6)
print("flow of z^2 d/dz:", Phi[0].format(["z", "t"]))
print("group law holds:", all(d.is_zero() for d in flow_group_defect(Phi)))

x, y = Series.variables(2, 6)
rot = flow_series(VectorField([-y, x]), 6)
print("\nrotation, first component:", rot[0].format(["x", "y", "t"]))

w, d0, d1 = Series.variables(3, 11)
f = ode_solve(None, OdeSpec(1, d1 - d0 - w), 10)
print("\nsolution of f' = f + z:", f)
