"""
Finding the informative features in a wide dataset
==================================================

Fifty features, five of which carry signal.  Two ways to find them:
rank by Pearson correlation with the target, or run the lasso many
times on random subsets of the samples and keep the features that
survive almost every time.
"""

from cfreg import (gen_sparse_linear, lasso_fit, lasso_lambda_max,
                   lasso_selection_protocol, pearson_rank)
from cfreg.reports import selection_text

data, truth = gen_sparse_linear(n=120, p=50, n_informative=5, rng_seed=7)
print(f"{data.n_samples} samples, {data.n_features} features, "
      f"true support: {sorted(truth)}")

# correlation ranking is cheap and already nails a strong linear signal
print("\ntop 8 features by |Pearson r|:")
for name, r in pearson_rank(data, 8):
    tag = "  <- informative" if name in truth else ""
    print(f"  {name}  r = {r:+.3f}{tag}")

# the lasso shrinks coefficients toward zero; above lambda_max everything
# is zero, and lowering lambda lets features enter one by one
lam_max = lasso_lambda_max(data)
print(f"\nlasso path (lambda_max = {lam_max:.1f}):")
for frac in (0.5, 0.2, 0.05, 0.01):
    result = lasso_fit(data, frac * lam_max)
    print(f"  lambda = {frac:4.2f} * lambda_max: "
          f"{len(result.selected):2d} features selected")

# stability selection: 100 lasso fits on random 80% subsets; a feature
# counts as selected when it survives at least 90% of the fits
lam = 0.05 * lam_max
rows, selected = lasso_selection_protocol(data, lam=lam, trials=100,
                                          subset_frac=0.8, threshold=0.9,
                                          rng_seed=0)
print(f"\nappearance percentages over 100 subset fits (lambda = {lam:.2f}):")
print(selection_text(rows[:10]))
print(f"\nstable set: {sorted(selected)}")
print(f"matches true support: {selected == set(truth)}")
