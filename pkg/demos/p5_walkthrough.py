"""From the level-4 curve to the Dyer-Lashof algebra at p = 5.

    python demos/p5_walkthrough.py
"""

from powerops.curves import c4_model, reconstruct_kappa_polynomial, specialize_to_E0
from powerops.dyer_lashof import DyerLashofAlgebra
from powerops.hecke import ell, t1, weighted_t1
from powerops.power_ops import apply_psi, derive_psi_h, phi
from powerops.rings import HRing

print("reconstructing W(kappa) from numerical 5-torsion ...")
K = reconstruct_kappa_polynomial(c4_model(), 5)
print(f"  W(kappa) = {K}  [{K.elapsed:.1f}s]")

model = specialize_to_E0(K)
print(f"  w(alpha) = {model.polynomial_str()}")

data = derive_psi_h(model)
for k, c in enumerate(data.psi_h.coords):
    print(f"  psi(h), alpha^{k}: {c}")

R = HRing(5, 24, 12)
h = R.gen()
delta = h - 26
print("\nphi(h) = h:", phi(data, h) == h)
print("t1(delta)            =", t1(data, delta))
print("weighted t1(delta,12)=", weighted_t1(data, delta, 12))
print("N(psi(delta))        =", apply_psi(data, R.exact().gen() - 26).norm())
print("ell(delta)           =", ell(data, delta))
print("ell(1 + h)           =", ell(data, 1 + h).truncate(4), "+ ...")

G = DyerLashofAlgebra(data)
print()
print(G.presentation_text())
c = G.commutator(G.t_gamma(1), G.gen(1)).coefficient((0, 1))
print(f"\n[t1~, Q1] has Q0Q1 coefficient {c}; t2~ central:",
      all(G.commutator(G.t_gamma(2), G.gen(k)).is_zero() for k in range(6)))
