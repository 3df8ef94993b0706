# %% [markdown]
# # Pairwise mutual information across the (M, sigma) grid
#
# Each cell averages ten reference models. The statistic is the largest
# off-diagonal mutual information (in nats) of the Boltzmann table of
# objective 2. The mean over pairs is exported as well.

# %%
import numpy as np

from _plotting import OUT, pyplot
from mnmland import SweepConfig, run_sweep

config = SweepConfig()
result = run_sweep(config, workers=4)
mat = result.matrix("mi_max_mean")
np.set_printoptions(precision=4, suppress=False, linewidth=140)
print("rows M =", config.m_grid, " columns sigma =", config.sigma_grid)
print(mat)
print("argmax M per sigma:", [config.m_grid[i] for i in mat.argmax(axis=0)])

# %%
plt = pyplot()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for row, m in zip(mat, config.m_grid):
        ax.plot(config.sigma_grid, row, marker="o", label=f"M={m}")
    ax.set_xlabel("sigma")
    ax.set_ylabel("max pairwise MI (nats)")
    ax.legend(ncol=3, fontsize=8)
    fig.tight_layout()
    fig.savefig(OUT / "mutual_information.png", dpi=120)
    print("wrote", OUT / "mutual_information.png")
