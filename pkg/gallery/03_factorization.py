# %% [markdown]
# # Boltzmann tables and their univariate factorization
#
# The Boltzmann map is strictly increasing per objective, so it keeps the
# Pareto set. The product of univariate marginals is exact for order-1
# objectives and only approximate once pairwise terms appear.
#
# At sigma = 36 the order-1 case still shows a jaccard below 1. The tables agree
# to about 1e-17, but both objectives are exact mirror images, so every
# solution ties on the true front and float64 rounding decides membership.

# %%
from _plotting import OUT, pyplot
from mnmland import generate_landscape, make_bi_objective, run_simulation

for m1, m2 in [(1, 1), (1, 2), (2, 3)]:
    sim = run_simulation(make_bi_objective(generate_landscape(10, 3, 36.0, seed=4), m1, m2))
    gaps = ", ".join(f"{g:.2e}" for g in sim.factorization_gaps())
    print(
        f"M=({m1},{m2})  max |p - q| per objective: {gaps}  "
        f"Boltzmann front equal: {sim.boltzmann_comparison.set_equal}  "
        f"factorized front jaccard: {sim.comparison.jaccard:.3f}"
    )

# %%
sim = run_simulation(make_bi_objective(generate_landscape(10, 3, 36.0, seed=4), 2, 3))
print("only in true front:", len(sim.comparison.only_in_a), " only in factorized front:", len(sim.comparison.only_in_b))

# %%
plt = pyplot()
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    tables = [
        (sim.boltzmann, sim.true_front, "Boltzmann"),
        (sim.products, sim.factorized_front, "univariate product"),
    ]
    for ax, (dists, front, title) in zip(axes, tables):
        x, y = dists[0].probs, dists[1].probs
        ax.scatter(x, y, s=3, c="0.7")
        idx = front.member_indices
        ax.scatter(x[idx], y[idx], s=8, c="C3")
        ax.set_title(title)
        ax.set_xlabel("p1")
        ax.set_ylabel("p2")
    fig.tight_layout()
    fig.savefig(OUT / "factorization.png", dpi=120)
    print("wrote", OUT / "factorization.png")
