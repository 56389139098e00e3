"""
Building and evaluating continued fraction models by hand
=========================================================

A model is a list of affine terms g_0..g_d and h_0..h_{d-1} over named
features, folded as g_0 + h_0/(g_1 + h_1/(g_2 + ...)).  This script
assembles one whose value is known in closed form, checks it, and walks
through serialization and depth extension.
"""

import numpy as np

from cfreg import (ContinuedFractionModel, LinearTerm, deserialize, evaluate,
                   extend_depth, format_model, serialize)

# x/(x + 1/(x + 2/x)) written as a depth-3 fraction: g = (0, x, x, x),
# h = (1, 1, 2).  At x = 2 the nesting gives 2 + 2/2 = 3, then
# 2 + 1/3 = 7/3, then 0 + 1/(7/3) = 3/7.
g = (LinearTerm(np.array([0.0]), 0.0),
     LinearTerm(np.array([1.0]), 0.0),
     LinearTerm(np.array([1.0]), 0.0),
     LinearTerm(np.array([1.0]), 0.0))
h = (LinearTerm(np.array([0.0]), 1.0),
     LinearTerm(np.array([0.0]), 1.0),
     LinearTerm(np.array([0.0]), 2.0))
model = ContinuedFractionModel(g, h, ("x",), np.array([True]))

print(format_model(model))
value = evaluate(model, np.array([2.0]))
print(f"\nvalue at x = 2: {value!r}  (3/7 = {3 / 7!r})")

# depth counts the subfractions, so 3 here and 0 for a plain affine model
print(f"depth {model.depth}, active features {model.active_features}")

# models round-trip through a JSON document
doc = serialize(model)
restored = deserialize(doc)
print(f"\nserialized to {len(doc)} bytes of JSON, round trip equal: "
      f"{restored == model}")

# extending the depth appends levels that leave predictions unchanged,
# which is how the search warm-starts each deeper round
deeper = extend_depth(model, 5)
same = evaluate(deeper, np.array([2.0])) == value
print(f"extended to depth {deeper.depth}, value preserved: {same}")
