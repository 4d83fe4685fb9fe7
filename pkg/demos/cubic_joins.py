"""Multiply a reflection class by an irreducible-quadratic class and watch
which cubic classes absorb them — only one constant term survives, always
with the same coefficient [3] = q² + q + 1."""

from glq.field import field_make
from glq.gltype import q_int
from glq.polyalg import format_poly, parse_poly
from glq.stablecenter import sweep_merge_irreducible

for q, xi, fprime_s in ((3, 2, "t^2+t+2"), (5, 2, "t^2+4*t+2")):
    field = field_make(q)
    fprime = parse_poly(field, fprime_s)
    forced = field.neg(field.mul(xi, fprime[0]))
    print(f"q = {q}: K_[1@t-{xi}] · K_[1@{fprime_s}] meets the cubic "
          f"classes at:")
    hits = zeros = 0
    for r in sweep_merge_irreducible(field, xi, fprime):
        f = r.nu.entries[0][0]
        if r.computed:
            hits += 1
            print(f"  {format_poly(field, f).ljust(18)} {r.computed}  "
                  f"(constant term {f[0]})")
        else:
            zeros += 1
        assert r.match, "conjectured value disagrees with computation"
        assert (f[0] == forced) == bool(r.computed)
    print(f"  …and coefficient 0 on the other {zeros} irreducible cubics.")
    print(f"  every hit is q²+q+1 = {q_int(q, 3)} and has constant term "
          f"{forced} = -{xi}·{fprime[0]} exactly.\n")
