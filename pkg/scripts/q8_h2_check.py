"""Three independent computations of dim H^2(Q8, F2).

Universal coefficients give H^2(G, F_p) = Hom(H_2(G), F_p) + Ext(H_1(G), F_p).
For Q8 the Schur multiplier H_2 vanishes and H_1 = C2 x C2, so the dimension is 2.
"""

from galois_euler.cohom import cocycle_oracle, cohomology
from galois_euler.fingroup import builtin_group
from galois_euler.galmod import trivial_module


def main() -> None:
    Q8 = builtin_group("Q8")
    M = trivial_module(Q8, 2)
    ab = Q8.abelianization()
    ext_dim = sum(1 for a in ab if a % 2 == 0)
    print(f"abelianization invariants {ab}; Schur multiplier trivial")
    print(f"universal coefficients: dim H^2 = 0 + {ext_dim}")
    print(f"smith normal form engine: dims {cohomology(M).dims}")
    print(f"cochain linear algebra:   dims {cocycle_oracle(M).dims}")


if __name__ == "__main__":
    main()
