"""q-expansions: Delta, E2, log Delta and the operators acting on them.

    python demos/q_expansions.py [L]
"""

import sys
from fractions import Fraction

from powerops import modforms as mf

L = int(sys.argv[1]) if len(sys.argv) > 1 else 30
D = mf.delta_qexp(L)
print("Delta     =", D.truncate(8))
print("E2        =", mf.e2_qexp(8))
print("theta Del =", mf.serre_derivative(D, 12))

ld = mf.log_qexp(D)
print("log Delta =", ld.truncate(6))
print("D log Del = E2:", mf.log_d(ld).parts[0].agrees(mf.e2_qexp(L)))

for p in (2, 3, 5, 7):
    T = mf.hecke_Tp(mf.LogQSeries.from_q(D, 12), p)
    lam = T.parts[0][1]
    eigen = mf.hecke_Tp(ld, p).agrees(ld * mf.sigma(-1, p))
    print(f"p = {p}: T_p Delta = {lam} Delta through q^{T.L};"
          f" T_p log Delta = {mf.sigma(-1, p)} log Delta: {eigen};"
          f" F_1 log Delta = 0: {mf.f_operator(ld, p).is_zero()}")

lq = mf.LogQSeries.log_q(L)
print("T_5 log q = (1/5 + 1/25) log q:",
      mf.hecke_Tp(lq, 5).agrees(lq * (Fraction(1, 5) + Fraction(1, 25))))
