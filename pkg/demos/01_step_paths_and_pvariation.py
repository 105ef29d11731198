"""Step paths and exact p-variation.

A step path is piecewise constant and right continuous: it holds each value
until the next breakpoint.  Its p-variation (the supremum of sum |increments|^p
over all subdivisions) is computed exactly by a dynamic program over the
breakpoints, and for tiny paths we can cross-check against brute-force
enumeration of every subsequence.
"""

import numpy as np

from pvreflect import (
    Interval,
    make_path,
    p_variation,
    p_variation_brute,
    running_max,
    variation_norm,
)

# a three-step scalar path: 0 -> 1 -> 3
path = make_path([0.0, 1.0, 2.0], [0.0, 1.0, 3.0])
print("values at t=0.5, 1.0, 5.0:", path.eval(0.5), path.eval(1.0), path.eval(5.0))
print("left limit at the jump t=1:", path.left_limit(1.0))

# for p=2 the best subdivision skips the middle point: |3-0|^2 = 9 > 1 + 4
for p in (1.0, 1.5, 2.0, 3.0):
    dp = p_variation(path, p)
    brute = p_variation_brute(path, p)
    print(f"p={p}: dynamic program {dp:.6f}   brute force {brute:.6f}")

# variation over sub-windows is monotone and superadditive
print("\nwindow [0,1]:", p_variation(path, 2.0, Interval(0.0, 1.0)))
print("window [1,2]:", p_variation(path, 2.0, Interval(1.0, 2.0)))
print("window [0,2]:", p_variation(path, 2.0, Interval(0.0, 2.0)))

# the variation norm adds the magnitude at the window start
print("\nvariation norm (p=2):", variation_norm(path, 2.0))

# running maxima never oscillate more than the inputs they came from
rng = np.random.default_rng(1)
times = np.linspace(0.0, 1.0, 21)
y1 = make_path(times, np.cumsum(rng.normal(size=21)))
y2 = make_path(times, np.cumsum(rng.normal(size=21)))
lhs = p_variation(running_max(y1) - running_max(y2), 2.0)
rhs = p_variation(y1 - y2, 2.0)
print(f"\nrunning-max contraction: {lhs:.4f} <= {rhs:.4f} -> {lhs <= rhs}")
