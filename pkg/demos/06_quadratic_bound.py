"""The square-root bound for a single quadratic.

For f(x) = x'Ax/2 + b'x + c with a critical point, the distance to the
level set through that point obeys

    sqrt(2 lambda(A))/2 * d(x, f^{-1}(f(xbar))) <= |f(x) - f(xbar)|^(1/2),

where lambda(A) is the smallest nonzero eigenvalue magnitude.  The
gradient inequality behind it is checked on random samples, and f = x^2
shows the equality case.
"""

import numpy as np

from holderbounds import quadratic_bound

rng = np.random.default_rng(6)

# Equality case: f = x^2 gives constant 1 and |x| = |x^2|^(1/2) exactly.
qb = quadratic_bound(np.array([[2.0]]), np.zeros(1))
print("f = x^2: lambda =", qb.lambda_min_nonzero, "constant =", qb.constant)
for x in (0.5, -2.0):
    print(f"  x = {x}: c*|x - 0| = {qb.constant * abs(x):.6g} vs sqrt|f| = {abs(x*x)**0.5:.6g}")

# Random indefinite instance with b in range(A).
raw = rng.uniform(-2, 2, size=(3, 3))
A = (raw + raw.T) / 2
b = A @ rng.uniform(-1, 1, size=3)
qb = quadratic_bound(A, b, c0=0.7)
print("\nrandom symmetric 3x3:")
print("  eigenvalues:", np.round(np.linalg.eigvalsh(A), 4))
print("  lambda(A) =", round(qb.lambda_min_nonzero, 6), " constant =", round(qb.constant, 6))
print("  critical point:", np.round(qb.critical_point, 4))

fbar = qb.value(qb.critical_point)
worst = 0.0
for _ in range(2000):
    x = qb.critical_point + rng.uniform(-3, 3, size=3)
    lhs = np.sqrt(2 * qb.lambda_min_nonzero) * abs(qb.value(x) - fbar) ** 0.5
    rhs = np.linalg.norm(qb.gradient(x))
    worst = max(worst, lhs - rhs)
print("  gradient inequality slack (max lhs - rhs, should be <= 0):", f"{worst:.3e}")
