# %% [markdown]
# # Clumping of fitness values
#
# Coefficients are drawn as exp(-|sigma z|). Larger sigma pushes most of them
# towards zero, so many genotypes end up with (nearly) the same fitness.

# %%
import numpy as np

from _plotting import OUT, pyplot
from mnmland import generate_landscape

N = 10
for sigma in (1.0, 5.0, 19.0, 36.0):
    land = generate_landscape(N, 2, sigma, seed=0)
    values = land.table()
    print(
        f"sigma={sigma:5.1f}  terms={len(land.terms)}  "
        f"median coefficient={np.median(land.coefficients):.2e}  "
        f"distinct fitness values (3 d.p. after rescaling)="
        f"{len(np.unique(np.round((values - values.min()) / np.ptp(values), 3)))}"
    )

# %% [markdown]
# The all-ones spin vector (table index 0) is always the global maximum.

# %%
land = generate_landscape(N, 4, 3.0, seed=1)
table = land.table()
print("max at index", int(np.argmax(table)), "value", table[0], "sum of coefficients", land.coefficients.sum())

# %%
plt = pyplot()
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
    for ax, sigma in zip(axes, (1.0, 19.0)):
        v = generate_landscape(N, 2, sigma, seed=0).table()
        ax.hist((v - v.min()) / np.ptp(v), bins=60)
        ax.set_title(f"sigma = {sigma:g}")
        ax.set_xlabel("rescaled fitness")
    fig.tight_layout()
    fig.savefig(OUT / "clumping.png", dpi=120)
    print("wrote", OUT / "clumping.png")
