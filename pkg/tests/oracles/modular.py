"""Cusp-form dimensions from the Eisenstein/Delta basis: M_k has basis E4^a E6^b
with 4a + 6b = k, and S_k = Delta * M_{k-12}."""


def modular_dim(k):
    if k < 0 or k % 2:
        return 0
    return sum(1 for a in range(k // 4 + 1) for b in range(k // 6 + 1) if 4 * a + 6 * b == k)


def cusp_dim(k):
    return modular_dim(k - 12) if k >= 12 else 0
