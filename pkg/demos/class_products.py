"""Multiply class sums in the center of the integral group algebra of
GL_n(q) and verify the expansion against an independent convolution."""

from glq.classcalc import (multiply_class_sums, multiply_oracle,
                           structure_constant_at)
from glq.field import field_make
from glq.gltype import class_size, norm, parse_gltype

F3 = field_make(3)
T = lambda s: parse_gltype(F3, s)

lam, mu, n = T("1@t-2"), T("1@t-2"), 2
print(f"K_[{lam}] · K_[{mu}] in the center of Z[GL_{n}(3)]:")
exp = multiply_class_sums(lam, mu, n, F3)
for nu, a in exp.items_sorted():
    print(f"  {a:4} · K_[{nu}]")

print("\nthe counting identity pins the whole table:")
lhs = sum(a * class_size(nu, n) for nu, a in exp.terms.items())
rhs = class_size(lam, n) * class_size(mu, n)
print(f"  Σ a·|K| = {lhs} = |K_λ|·|K_μ| = {rhs}")
assert lhs == rhs

print("\nan independent pairwise convolution gives the same expansion:")
oracle = multiply_oracle(lam, mu, n, F3)
assert oracle.terms == exp.terms
print("  verified.")

print("\nsingle coefficients come cheaper than full tables —")
nu = T("1,1@t-2")
a = structure_constant_at(lam, mu, nu, n, F3)
print(f"  coefficient of K_[{nu}] is {a}")
assert a == exp.get(nu)

print("\nthe same product at a larger matrix size has more terms:")
exp4 = multiply_class_sums(lam, mu, 4, F3)
for nu, a in exp4.items_sorted():
    print(f"  {a:5} · K_[{nu}]")
print("the top-degree layer (norm 2) is identical at n = 2 and n = 4; only")
print("the deficient terms moved:")
for nu, a in exp.items_sorted():
    if norm(nu) == 2:
        assert exp4.get(nu) == a
        print(f"  stable   K_[{nu}]: {a} at both sizes")
    else:
        print(f"  shifting K_[{nu}]: {a} at n=2, {exp4.get(nu)} at n=4")
