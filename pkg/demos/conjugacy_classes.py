"""Walk through conjugacy bookkeeping in GL_n(q): types, modified types,
class sizes, and the exact centralizer formula checked by brute force."""

import numpy as np

from glq.classcalc import enumerate_group
from glq.field import field_make
from glq.gltype import (canonical_matrix, centralizer_order, class_size,
                        enumerate_plain_types, gl_order, modify, norm,
                        type_of)

F3 = field_make(3)
n = 2

print(f"GL_{n}(3) has order {gl_order(F3, n)} and these conjugacy classes:")
print(f"{'type':14}{'modified':12}{'length':8}{'size':6}{'centralizer':11}")
total = 0
for T in enumerate_plain_types(F3, n):
    bar = modify(T)
    size = class_size(bar, n)
    total += size
    print(f"{str(T):14}{str(bar):12}{norm(bar):<8}{size:<6}"
          f"{centralizer_order(T):<11}")
assert total == gl_order(F3, n), "class sizes must add up to the group order"
print(f"sum of class sizes = {total} = |GL_{n}(3)|\n")

print("every class size times its centralizer order is the group order:")
for T in enumerate_plain_types(F3, n):
    assert class_size(modify(T), n) * centralizer_order(T) == gl_order(F3, n)
print("  verified.\n")

print("centralizer orders against brute-force commutant counting in GL_2(3):")
group = np.stack(list(enumerate_group(F3, n))).astype(np.int64)
for T in enumerate_plain_types(F3, n):
    J = canonical_matrix(T).astype(np.int64)
    commutant = int(np.all((group @ J) % 3 == (J @ group) % 3,
                           axis=(1, 2)).sum())
    print(f"  {str(T):14} commutant {commutant:4}   "
          f"formula {centralizer_order(T):4}")
    assert commutant == centralizer_order(T)

print("\nthe type of a matrix is read off from its kernel filtrations:")
A = np.array([[0, 1], [1, 2]], dtype=np.uint8)
print(f"  the matrix [[0,1],[1,2]] over F_3 has type {type_of(F3, A)}")
