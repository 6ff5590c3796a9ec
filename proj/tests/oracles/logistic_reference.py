#!/usr/bin/env python3
# Copyright 2026 The Somno Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Reference multinomial logistic regression fit from scikit-learn on a
# small deterministic problem. sklearn minimises C*sum(loss) + |W|^2/2, so
# C = 1/l2 reproduces sum(loss) + l2/2 |W|^2 with an unpenalised intercept.
import numpy as np
from sklearn.linear_model import LogisticRegression

MASK = (1 << 64) - 1


def lcg(n, seed):
    s = seed
    out = []
    for _ in range(n):
        s = (s * 6364136223846793005 + 1442695040888963407) & MASK
        out.append((s >> 11) / 2.0**53)
    return np.array(out)


n, d, k = 120, 6, 4
u = lcg(n * d, 4242).reshape(n, d)
y = np.arange(n) % k
x = u.copy()
for i in range(n):
    x[i, y[i] % d] += 0.6
    x[i, (y[i] + 2) % d] -= 0.3


def polish(W, b, l2, steps=20):
    # Newton iterations on the exact objective; sklearn's lbfgs stops with
    # gradients near 1e-8, which leaves ~1e-6 error in the weights.
    xa = np.hstack([x, np.ones((n, 1))])
    theta = np.hstack([W, b[:, None]])
    pen = np.ones(d + 1)
    pen[-1] = 0
    for _ in range(steps):
        s = xa @ theta.T
        s -= s.max(1, keepdims=True)
        p = np.exp(s)
        p /= p.sum(1, keepdims=True)
        g = (p - np.eye(k)[y]).T @ xa + l2 * theta * pen
        h = np.zeros((k * (d + 1), k * (d + 1)))
        for i in range(n):
            a = np.diag(p[i]) - np.outer(p[i], p[i])
            h += np.kron(a, np.outer(xa[i], xa[i]))
        h += l2 * np.kron(np.eye(k), np.diag(pen))
        # The softmax is invariant to a common bias shift; fix it with a
        # tiny ridge on the biases and re-centre afterwards.
        h += 1e-12 * np.kron(np.eye(k), np.diag(1 - pen))
        theta -= np.linalg.solve(h, g.ravel()).reshape(k, d + 1)
        theta[:, -1] -= theta[:, -1].mean()
    return theta[:, :d], theta[:, -1], np.abs(g).max() / n


for l2 in (1.0, 0.1):
    m = LogisticRegression(C=1.0 / l2, tol=1e-12, max_iter=100000).fit(x, y)
    W, b, gmax = polish(m.coef_.copy(), m.intercept_ - m.intercept_.mean(), l2)
    print(f"l2={l2} (sklearn start, Newton polished; per-row grad {gmax:.1e})")
    print("W", ", ".join(repr(float(v)) for v in W.ravel()))
    print("b", ", ".join(repr(float(v)) for v in b))
